#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logstar/const_op.hpp"
#include "logstar/errors.hpp"
#include "logstar/poly.hpp"

#include <random>

using namespace logstar;

namespace {

const std::vector<std::string> kXY{"x", "y"};

Poly P(const char* text) { return parse_poly(text, kXY); }

ConstOp op(const char* symbol, int order) { return ConstOp::from_symbol(DualPoly{P(symbol)}, order); }

Poly random_poly(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> coef(-4, 4), deg(0, max_degree), var(0, 1);
    Poly p(2);
    for (int t = 0; t < 4; ++t) {
        Exponents e(2);
        for (int k = deg(rng); k > 0; --k) {
            const int i = var(rng);
            e.set(i, e[i] + 1);
        }
        p.add_term(e, Coefficient(coef(rng)));
    }
    return p;
}

ConstOp random_op(std::mt19937_64& rng, int order, bool unit_constant) {
    std::uniform_int_distribution<int> coef(-3, 3), deg(1, order), var(0, 1);
    ConstOp d(2, order);
    if (unit_constant) d.add_term(Exponents(2), Coefficient(1));
    for (int t = 0; t < 4; ++t) {
        Exponents e(2);
        for (int k = deg(rng); k > 0; --k) {
            const int i = var(rng);
            e.set(i, e[i] + 1);
        }
        d.add_term(e, Coefficient(make_rational(coef(rng), 2)));
    }
    return d;
}

} // namespace

TEST_CASE("polynomial arithmetic") {
    CHECK(P("(x+y)*(x-y)") == P("x^2 - y^2"));
    CHECK(poly_arith(P("x+y"), P("x-y"), PolyOp::Mul) == P("x^2-y^2"));
    CHECK(poly_arith(P("x^2"), P("x^3"), PolyOp::Mul) == P("x^5"));
    const Poly f = P("3*x*y - 1/2*y^3 + 2");
    CHECK(f * P("1") == f);
    CHECK(poly_arith(f, P("0"), PolyOp::Add) == f);
    CHECK((f - f).is_zero());
    CHECK((f - f).terms().empty());
    CHECK_THROWS_AS(poly_arith(f, Poly::variable(3, 0), PolyOp::Add), DimensionMismatch);
    CHECK(f.degree() == 3);
    CHECK_FALSE(f.is_homogeneous());
    CHECK(f.homogeneous_component(3) == P("-1/2*y^3"));
}

TEST_CASE("polynomial text format") {
    CHECK(to_string(P("y + x"), kXY) == "x + y");
    CHECK(to_string(P("1 + x^2*y - 2*x"), kXY) == "x^2*y - 2*x + 1");
    CHECK(to_string(P("0"), kXY) == "0");
    CHECK(to_string(P("-x*y"), kXY) == "-x*y");
    CHECK(to_string(P("l3*x + 2*l3*l5"), kXY) == "l3*x + 2*l3*l5");
    for (const char* text : {"x^3 - 1/2*x*y + l3", "-(x + y)^3", "7/3*l3*x^2 - l5*y + 1"})
        CHECK(P(to_string(P(text), kXY).c_str()) == P(text));
    CHECK_THROWS_AS(P("x +"), ParseError);
    CHECK_THROWS_AS(P("w"), ParseError);
    CHECK_THROWS_AS(P("x^"), ParseError);
    CHECK_THROWS_AS(P("x)"), ParseError);
    CHECK_THROWS_AS(P("1/0"), DomainError);
}

TEST_CASE("operator application") {
    CHECK(apply_operator(op("x", 3), P("x^2*y")) == P("2*x*y"));
    const Poly f = P("x^3 - 2*x*y + 5");
    CHECK(apply_operator(ConstOp::identity(2, 3), f) == f);
    // exp(t d_x) truncated at 2, with the formal symbol l3 standing in for t
    const ConstOp shift = exp_operator(ConstOp::partial(2, 0, 2) * lambda_generator(3), 2);
    CHECK(shift == op("1 + l3*x + 1/2*l3^2*x^2", 2));
    CHECK(apply_operator(shift, P("x^2")) == P("(x + l3)^2"));
    CHECK_THROWS_AS(apply_operator(op("x", 2), P("x^3")), DegreeCapExceeded);
}

TEST_CASE("exponential is the Taylor shift") {
    // exp(d_x) x^3 = (x+1)^3
    const ConstOp e = exp_operator(ConstOp::partial(2, 0, 3), 3);
    CHECK(apply_operator(e, P("x^3")) == P("(x+1)^3"));
    CHECK(apply_operator(exp_operator(ConstOp::partial(2, 0, 5) * Coefficient(-2), 5), P("x^4*y")) == P("(x-2)^4*y"));
    // exp(t d_x) truncated at 2 equals 1 + t d + t^2 d^2 / 2 with t = 3/2
    const ConstOp et = exp_operator(ConstOp::partial(2, 0, 2) * Coefficient(make_rational(3, 2)), 2);
    CHECK(et == op("1 + 3/2*x + 9/8*x^2", 2));
    CHECK(apply_operator(et, P("x^2")) == P("(x + 3/2)^2"));
    CHECK(exp_operator(ConstOp(2, 4), 4).is_identity());
    CHECK_THROWS_AS(exp_operator(ConstOp::identity(2, 3), 3), DomainError);
}

TEST_CASE("exponents of commuting operators add") {
    const ConstOp a = ConstOp::partial(2, 0, 5) * Coefficient(make_rational(2, 3));
    const ConstOp b = ConstOp::partial(2, 0, 5) * Coefficient(make_rational(-1, 5));
    CHECK(compose_operators(exp_operator(a, 5), exp_operator(b, 5)) == exp_operator(a + b, 5));
}

TEST_CASE("composition") {
    const ConstOp dx = ConstOp::partial(2, 0, 3), dy = ConstOp::partial(2, 1, 3);
    CHECK(compose_operators(dx, dy) == compose_operators(dy, dx));
    CHECK(compose_operators(dx, dy) == op("x*y", 3));
    const ConstOp d = op("1 + x - 3*x*y^2", 4);
    CHECK(compose_operators(d, ConstOp::identity(2, 4)) == d);
    CHECK(compose_operators(op("1 + x", 2), op("1 - x", 2)) == op("1 - x^2", 2));
    CHECK(compose_operators(op("1 + x", 2), op("1 + y", 5)).order() == 2);
}

TEST_CASE("inversion") {
    CHECK(invert_operator(ConstOp::identity(2, 4)).is_identity());
    CHECK(invert_operator(op("1 + x", 3)) == op("1 - x + x^2 - x^3", 3));
    CHECK(invert_operator(op("2", 3)) == op("1/2", 3));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const ConstOp d = random_op(rng, 5, false);
        CHECK(invert_operator(exp_operator(d, 5)) == exp_operator(d * Coefficient(-1), 5));
    }
    CHECK_THROWS_AS(invert_operator(op("x", 3)), DomainError);
    ConstOp lam(2, 3);
    lam.add_term(Exponents(2), lambda_generator(3) + Coefficient(1));
    CHECK_THROWS_AS(invert_operator(lam), DomainError);
}

TEST_CASE("operator properties on random inputs") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const ConstOp d1 = random_op(rng, 6, true), d2 = random_op(rng, 6, trial % 2 == 0);
        const Poly f = random_poly(rng, 6);
        CHECK(apply_operator(compose_operators(d1, d2), f) == apply_operator(d1, apply_operator(d2, f)));
        CHECK(invert_operator(invert_operator(d1)) == d1);
        const ConstOp inv = invert_operator(d1);
        CHECK(compose_operators(d1, inv).is_identity());
        if (!f.is_zero()) {
            // unit constant term: degree is preserved
            CHECK(apply_operator(d1, f).degree() == f.degree());
            const ConstOp nilp = d1 - ConstOp::identity(2, 6);
            const Poly g = apply_operator(nilp, f);
            CHECK((g.is_zero() || g.degree() < f.degree()));
        }
    }
}

TEST_CASE("symbols round trip") {
    const ConstOp d = op("1 - 1/4*x + 5/96*x^2 + l3*x^3", 6);
    CHECK(d.symbol().poly == P("1 - 1/4*x + 5/96*x^2 + l3*x^3"));
    CHECK(d.constant_term() == Coefficient(1));
    CHECK_FALSE(d.is_identity());
    // truncation drops what lies above the order
    CHECK(op("1 + x^4", 3).is_identity());
}
