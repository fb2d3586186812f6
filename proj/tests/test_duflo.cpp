#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logstar/duflo.hpp"
#include "logstar/errors.hpp"

#include <random>

using namespace logstar;

namespace {

struct Alg {
    explicit Alg(const char* name) : L(builtin_algebra(name)) {}
    Poly p(const char* text) const { return parse_poly(text, L.basis_names()); }
    Poly star(StarProductKind kind, const Poly& f, const Poly& g) const { return logstar::star(L, kind, f, g); }
    LieAlgebra L;
};

constexpr StarProductKind kAllKinds[] = {StarProductKind::Standard, StarProductKind::Logarithmic, StarProductKind::Gutt};

// Coefficients of sqrt((1 - e^-z) / z) up to z^n, by series arithmetic.
std::vector<Rational> sqrt_j_series(int n) {
    std::vector<Rational> g(n + 1), s(n + 1);
    for (int k = 0; k <= n; ++k) g[k] = Rational((k % 2 ? -1 : 1)) / factorial(k + 1);
    s[0] = 1;
    for (int k = 1; k <= n; ++k) {
        Rational acc = g[k];
        for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
        s[k] = acc / 2;
    }
    return s;
}

Poly random_monomial(std::mt19937_64& rng, int dim, int degree) {
    std::uniform_int_distribution<int> var(0, dim - 1), coef(1, 3);
    Exponents e(dim);
    for (int k = 0; k < degree; ++k) {
        const int i = var(rng);
        e.set(i, e[i] + 1);
    }
    return Poly::monomial(e, Coefficient(coef(rng)));
}

std::vector<Poly> all_monomials(int dim, int max_degree) {
    std::vector<Poly> out;
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == dim) {
            Exponents x(dim);
            for (int k = 0; k < dim; ++k) x.set(k, e[static_cast<std::size_t>(k)]);
            out.push_back(Poly::monomial(x, Coefficient(1)));
            return;
        }
        for (int a = 0; a <= left; ++a) {
            e[static_cast<std::size_t>(i)] = a;
            self(self, i + 1, left - a);
        }
    };
    rec(rec, 0, max_degree);
    return out;
}

} // namespace

TEST_CASE("Bernoulli numbers") {
    const std::vector<Rational> expected{1, make_rational(-1, 2), make_rational(1, 6), 0, make_rational(-1, 30), 0,
                                         make_rational(1, 42), 0, make_rational(-1, 30), 0, make_rational(5, 66), 0,
                                         make_rational(-691, 2730), 0, make_rational(7, 6)};
    for (int n = 0; n < static_cast<int>(expected.size()); ++n) CHECK(bernoulli(n) == expected[static_cast<std::size_t>(n)]);
}

TEST_CASE("Duflo element on the affine line algebra") {
    const Alg aff("aff1");
    const auto s = sqrt_j_series(8);
    const ConstOp d = duflo_element(aff.L, 8);
    for (int k = 0; k <= 8; ++k) CHECK(d.symbol().poly.coefficient(Exponents{k, 0}) == Coefficient(s[k]));
    CHECK(d.symbol().poly.coefficient(Exponents{2, 0}) == Coefficient(make_rational(5, 96)));
    CHECK(d.symbol().poly.coefficient(Exponents{1, 0}) == Coefficient(make_rational(-1, 4)));
    CHECK(d.symbol().poly.coefficient(Exponents{0, 1}).is_zero());
}

TEST_CASE("Duflo element on sl2 is sinh(u/2)/(u/2)") {
    // eigenvalues of ad are 0 and +-u with c2 = 2u^2, so sqrt(j) = sum (c2/8)^k / (2k+1)!
    const Alg sl2("sl2");
    const Poly c2 = trace_polynomial(sl2.L, 2).poly.poly;
    Poly expected = Poly::constant(3, Coefficient(1)), power = Poly::constant(3, Coefficient(1));
    for (int k = 1; k <= 3; ++k) {
        power = power * c2 * Coefficient(make_rational(1, 8));
        expected += power * Coefficient(Rational(1) / factorial(2 * k + 1));
    }
    CHECK(duflo_element(sl2.L, 6).symbol().poly == expected);
}

TEST_CASE("order-2 coefficient of the Duflo element") {
    for (const auto& name : builtin_algebra_names()) {
        CAPTURE(name);
        const LieAlgebra L = builtin_algebra(name);
        const Poly c1 = trace_polynomial(L, 1).poly.poly, c2 = trace_polynomial(L, 2).poly.poly;
        const Poly order2 = duflo_element(L, 4).symbol().poly.homogeneous_component(2);
        CHECK(order2 == c2 * Coefficient(make_rational(1, 48)) + c1 * c1 * Coefficient(make_rational(1, 32)));
        CHECK(duflo_element(L, 4, Rational(0)).symbol().poly.homogeneous_component(2) ==
              c2 * Coefficient(make_rational(1, 48)));
    }
}

TEST_CASE("nilpotent and abelian algebras have trivial elements") {
    for (const char* name : {"heisenberg3", "abelian2", "abelian3"}) {
        const LieAlgebra L = builtin_algebra(name);
        CHECK(duflo_element(L, 6).is_identity());
        CHECK(log_element(L, 6).is_identity());
        CHECK(equivalence_operator(L, 6).is_identity());
    }
}

TEST_CASE("equivalence operator") {
    const Alg aff("aff1");
    const Poly expected = aff.p("1 + l3*x^3 + l5*x^5 + 1/2*l3^2*x^6");
    CHECK(equivalence_operator(aff.L, 6).symbol().poly == expected);
    CHECK(equivalence_operator(builtin_algebra("sl2"), 6).is_identity());
    CHECK(equivalence_operator(builtin_algebra("gl2"), 6).is_identity());
    for (const auto& name : builtin_algebra_names()) {
        const LieAlgebra L = builtin_algebra(name);
        for (int i = 0; i < L.dim(); ++i) CHECK(apply_operator(equivalence_operator(L, 6), Poly::variable(L.dim(), i)) == Poly::variable(L.dim(), i));
    }
    CHECK_THROWS_AS(equivalence_operator(aff.L, 9), TruncationOverflow);
    {
        const ScopedLambdaWeightCap cap(17);
        CHECK_NOTHROW(equivalence_operator(aff.L, 17));
    }
    CHECK_THROWS_AS(equivalence_operator(aff.L, 18), DomainError);
}

TEST_CASE("logarithmic element") {
    const Alg aff("aff1");
    const ConstOp log = log_element(aff.L, 6), duflo = duflo_element(aff.L, 6);
    CHECK(log == compose_operators(duflo, equivalence_operator(aff.L, 6)));
    const Poly diff = log.symbol().poly - duflo.symbol().poly;
    CHECK(diff.homogeneous_component(0).is_zero());
    CHECK(diff.homogeneous_component(1).is_zero());
    CHECK(diff.homogeneous_component(2).is_zero());
    CHECK(diff.homogeneous_component(3) == aff.p("l3*x^3"));
    const Alg t2("t2");
    CHECK(log_element(t2.L, 6) == compose_operators(duflo_element(t2.L, 6), equivalence_operator(t2.L, 6)));
}

TEST_CASE("isomorphisms into the enveloping algebra") {
    for (const auto& name : builtin_algebra_names()) {
        const LieAlgebra L = builtin_algebra(name);
        for (auto kind : kAllKinds)
            for (int i = 0; i < L.dim(); ++i) {
                const UeaElement u = iso_to_uea(L, kind, Poly::variable(L.dim(), i));
                if (L.is_abelian() || kind == StarProductKind::Gutt || trace_polynomial(L, 1).poly.poly.is_zero())
                    CHECK(u == UeaElement::generator(shared_enveloping_algebra(L), i));
            }
    }
    const Alg h3("heisenberg3");
    const Poly f = h3.p("x^2*y - 3*z*y + x^3*z^2");
    CHECK(iso_to_uea(h3.L, StarProductKind::Standard, f) == iso_to_uea(h3.L, StarProductKind::Gutt, f));
    CHECK(iso_to_uea(h3.L, StarProductKind::Logarithmic, f) == iso_to_uea(h3.L, StarProductKind::Gutt, f));
    const Alg aff("aff1");
    const UeaElement d = iso_to_uea(aff.L, StarProductKind::Logarithmic, aff.p("x^3")) -
                         iso_to_uea(aff.L, StarProductKind::Standard, aff.p("x^3"));
    CHECK(d == UeaElement::constant(shared_enveloping_algebra(aff.L), lambda_generator(3) * Coefficient(6)));
    CHECK_THROWS_AS(iso_to_uea(aff.L, StarProductKind::Standard, aff.p("x^7")), DegreeCapExceeded);
}

TEST_CASE("star products transferred by hand") {
    const Alg h3("heisenberg3");
    for (auto kind : kAllKinds) CHECK(h3.star(kind, h3.p("x"), h3.p("y")) == h3.p("x*y + 1/2*z"));
    // I(x) = X - 1/4, I(xy) = XY - 3/4 Y, so x * y = xy + y/2
    const Alg aff("aff1");
    CHECK(aff.star(StarProductKind::Standard, aff.p("x"), aff.p("y")) == aff.p("x*y + 1/2*y"));
    CHECK(aff.star(StarProductKind::Logarithmic, aff.p("x"), aff.p("y")) == aff.p("x*y + 1/2*y"));
    CHECK(aff.star(StarProductKind::Gutt, aff.p("x"), aff.p("y")) == aff.p("x*y + 1/2*y"));
    // I(ef) = EF - H/2 + 1/6, so e * f = ef + h/2 - 1/6
    const Alg sl2("sl2");
    CHECK(sl2.star(StarProductKind::Standard, sl2.p("e"), sl2.p("f")) == sl2.p("e*f + 1/2*h - 1/6"));
    CHECK(sl2.star(StarProductKind::Logarithmic, sl2.p("e"), sl2.p("f")) == sl2.p("e*f + 1/2*h - 1/6"));
    CHECK(sl2.star(StarProductKind::Gutt, sl2.p("e"), sl2.p("f")) == sl2.p("e*f + 1/2*h"));
}

TEST_CASE("unit") {
    for (const auto& name : builtin_algebra_names()) {
        const LieAlgebra L = builtin_algebra(name);
        std::mt19937_64 rng(41);
        const Poly one = Poly::constant(L.dim(), Coefficient(1));
        for (auto kind : kAllKinds)
            for (int t = 0; t < 5; ++t) {
                const Poly f = random_monomial(rng, L.dim(), t + 1);
                CHECK(star(L, kind, one, f) == f);
                CHECK(star(L, kind, f, one) == f);
            }
    }
}

TEST_CASE("logarithmic and standard products on the affine line algebra") {
    const Alg aff("aff1");
    const auto S = StarProductKind::Standard, G = StarProductKind::Logarithmic;
    // T(x) = x and T(x^2) = x^2, so x *log x^2 = T^-1(x * x^2), and only the
    // x^3 term of x * x^2 meets the l3 d^3 part of T^-1.
    const Poly a = aff.star(G, aff.p("x"), aff.p("x^2")) - aff.star(S, aff.p("x"), aff.p("x^2"));
    CHECK(a == aff.p("-6*l3"));
    // T(x^3) = x^3 + 6 l3 and every term of x^3 * y has y-degree one, so
    // T(x^3 * y) = x^3 * y + 6 l3 y = T(x^3) * T(y): the two products agree.
    CHECK(aff.star(G, aff.p("x^3"), aff.p("y")) == aff.star(S, aff.p("x^3"), aff.p("y")));
    CHECK(aff.star(G, aff.p("x^2"), aff.p("y^2")) == aff.star(S, aff.p("x^2"), aff.p("y^2")));
    const Poly b = aff.star(G, aff.p("x^2"), aff.p("x^3")) - aff.star(S, aff.p("x^2"), aff.p("x^3"));
    CHECK_FALSE(b.is_zero());
    for (const auto& [e, c] : b.terms()) CHECK_FALSE(c.is_rational());
}

TEST_CASE("unimodular collapse on sl2") {
    const LieAlgebra L = builtin_algebra("sl2");
    std::mt19937_64 rng(43);
    bool gutt_differs = false;
    for (int t = 0; t < 20; ++t) {
        const Poly f = random_monomial(rng, 3, 1 + t % 3), g = random_monomial(rng, 3, 1 + (t / 3) % 3);
        const Poly s = star(L, StarProductKind::Standard, f, g);
        CHECK(s == star(L, StarProductKind::Logarithmic, f, g));
        gutt_differs = gutt_differs || s != star(L, StarProductKind::Gutt, f, g);
    }
    CHECK(gutt_differs);
    CHECK_FALSE(duflo_element(L, 6).is_identity());
}

TEST_CASE("nilpotent collapse") {
    for (const char* name : {"heisenberg3", "abelian3"}) {
        const LieAlgebra L = builtin_algebra(name);
        const auto monos = all_monomials(3, 3);
        for (const auto& f : monos)
            for (const auto& g : monos) {
                const Poly s = star(L, StarProductKind::Standard, f, g);
                CHECK(s == star(L, StarProductKind::Logarithmic, f, g));
                CHECK(s == star(L, StarProductKind::Gutt, f, g));
            }
    }
}

TEST_CASE("associativity") {
    std::mt19937_64 rng(47);
    for (const char* name : {"aff1", "t2", "sl2", "gl2"}) {
        const LieAlgebra L = builtin_algebra(name);
        for (auto kind : kAllKinds) {
            const StarProduct P(L, kind);
            for (int t = 0; t < 10; ++t) {
                const Poly f = random_monomial(rng, L.dim(), 2), g = random_monomial(rng, L.dim(), 2),
                           h = random_monomial(rng, L.dim(), 2);
                CHECK(P(P(f, g), h) == P(f, P(g, h)));
            }
        }
    }
}

TEST_CASE("c1 is a derivation of both products") {
    const LieAlgebra L = builtin_algebra("aff1");
    const ConstOp D = ConstOp::from_symbol(trace_polynomial(L, 1).poly, 6);
    std::mt19937_64 rng(53);
    for (auto kind : {StarProductKind::Standard, StarProductKind::Logarithmic}) {
        const StarProduct P(L, kind);
        for (int t = 0; t < 20; ++t) {
            const Poly f = random_monomial(rng, 2, t % 4), g = random_monomial(rng, 2, (t / 4) % 3);
            CHECK(apply_operator(D, P(f, g)) == P(apply_operator(D, f), g) + P(f, apply_operator(D, g)));
        }
    }
}

TEST_CASE("intertwining by the equivalence operator") {
    std::mt19937_64 rng(59);
    for (const char* name : {"aff1", "t2"}) {
        const LieAlgebra L = builtin_algebra(name);
        const StarProduct S(L, StarProductKind::Standard), G(L, StarProductKind::Logarithmic);
        const ConstOp T = equivalence_operator(L, 6);
        for (int t = 0; t < 20; ++t) {
            const Poly f = random_monomial(rng, L.dim(), t % 4), g = random_monomial(rng, L.dim(), t % 3);
            CHECK(apply_operator(T, G(f, g)) == S(apply_operator(T, f), apply_operator(T, g)));
        }
    }
}

TEST_CASE("the c1 coefficient can be changed") {
    const LieAlgebra L = builtin_algebra("aff1");
    const StarProduct P(L, StarProductKind::Standard, {6, Rational(0)});
    const Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    CHECK(P(P(x, y), x) == P(x, P(y, x)));
    CHECK(P(x, y) - P(y, x) == poisson_bracket(L, x, y));
}

TEST_CASE("order components") {
    const Alg aff("aff1");
    std::mt19937_64 rng(61);
    for (auto kind : kAllKinds)
        for (int t = 0; t < 15; ++t) {
            const Poly f = random_monomial(rng, 2, 1 + t % 3), g = random_monomial(rng, 2, 1 + (t / 3) % 3);
            const Poly fg = aff.star(kind, f, g), gf = aff.star(kind, g, f);
            CHECK(order_component(f, g, fg, 0) == f * g);
            CHECK(order_component(f, g, fg, 1) - order_component(g, f, gf, 1) == poisson_bracket(aff.L, f, g));
            CHECK(order_component(f, g, fg, f.degree() + g.degree() + 1).is_zero());
            CHECK(order_component(f, g, fg, -1).is_zero());
        }
    const Poly r = aff.star(StarProductKind::Standard, aff.p("x"), aff.p("y"));
    CHECK(order_component(aff.p("x"), aff.p("y"), r, 1) == aff.p("1/2*y"));
    CHECK_THROWS_AS(order_component(aff.p("x + 1"), aff.p("y"), r, 0), DomainError);
    CHECK_THROWS_AS(order_component(aff.p("0"), aff.p("y"), r, 0), DomainError);
}

TEST_CASE("degree cap and kind parsing") {
    const Alg aff("aff1");
    CHECK_THROWS_AS(aff.star(StarProductKind::Standard, aff.p("x^4"), aff.p("y^3")), DegreeCapExceeded);
    const StarProduct P(aff.L, StarProductKind::Standard, {8});
    CHECK_NOTHROW(P(aff.p("x^4"), aff.p("y^3")));
    CHECK(parse_star_product_kind("standard") == StarProductKind::Standard);
    CHECK(parse_star_product_kind("kontsevich") == StarProductKind::Standard);
    CHECK(parse_star_product_kind("log") == StarProductKind::Logarithmic);
    CHECK(parse_star_product_kind("logarithmic") == StarProductKind::Logarithmic);
    CHECK(parse_star_product_kind("gutt") == StarProductKind::Gutt);
    CHECK_THROWS_AS(parse_star_product_kind("moyal"), InputError);
    CHECK(to_string(StarProductKind::Logarithmic) == "logarithmic");
}
