#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logstar/coefficient.hpp"
#include "logstar/errors.hpp"
#include "logstar/rational.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace logstar;

namespace {

Coefficient random_coefficient(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), pick(0, 3);
    const int gens[] = {3, 5};
    Coefficient c;
    for (int t = 0; t < 3; ++t) {
        Coefficient term = Coefficient(make_rational(num(rng), den(rng)));
        const int k = pick(rng);
        if (k == 1) term *= lambda_generator(gens[0]);
        if (k == 2) term *= lambda_generator(gens[1]);
        c += term;
    }
    return c;
}

} // namespace

TEST_CASE("rationals are canonical") {
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-2/4")) == "-1/2");
    CHECK(to_string(parse_rational("+2/4")) == "1/2");
    CHECK(to_string(parse_rational("10/5")) == "2");
    CHECK(to_string(parse_rational("0/7")) == "0");
    CHECK(parse_rational("3/6").get_den() == 2);
    CHECK_THROWS_AS(parse_rational("3/-6"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("1/"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK(factorial(5) == 120);
}

TEST_CASE("coefficient arithmetic examples") {
    const Coefficient l3 = lambda_generator(3), l5 = lambda_generator(5);
    const Coefficient half = make_rational(1, 2);
    CHECK(coeff_arith(half + l3, Coefficient(2), CoeffOp::Mul) == Coefficient(1) + Coefficient(2) * l3);
    const Coefficient prod = coeff_arith(l3, l5, CoeffOp::Mul);
    REQUIRE(prod.terms().size() == 1);
    CHECK(prod.terms()[0].first.weight() == 8);
    CHECK(prod.terms()[0].first.exponent(3) == 1);
    CHECK(prod.terms()[0].first.exponent(5) == 1);
    const Coefficient zero = coeff_arith(l3, l3, CoeffOp::Sub);
    CHECK(zero.is_zero());
    CHECK(zero.terms().empty());
    CHECK(zero == Coefficient());
}

TEST_CASE("lambda generators") {
    CHECK(lambda_generator(3).to_string() == "l3");
    CHECK(lambda_generator(5).to_string() == "l5");
    CHECK_THROWS_AS(lambda_generator(4), DomainError);
    CHECK_THROWS_AS(lambda_generator(1), DomainError);
    CHECK_THROWS_AS(lambda_generator(2), DomainError);
    CHECK_THROWS_AS(lambda_generator(19), DomainError);
    CHECK_FALSE(lambda_generator(3).is_rational());
    CHECK(Coefficient(make_rational(1, 48)).is_rational());
}

TEST_CASE("weight cap raises instead of truncating") {
    const Coefficient l3 = lambda_generator(3), l5 = lambda_generator(5);
    CHECK_NOTHROW(l3 * l5);
    CHECK_THROWS_AS(l3 * l3 * l3, TruncationOverflow);
    {
        ScopedLambdaWeightCap cap(9);
        CHECK_NOTHROW(l3 * l3 * l3);
    }
    CHECK(lambda_weight_cap() == 8);
    CHECK_THROWS_AS(l5 * l5, TruncationOverflow);
}

TEST_CASE("text round trip") {
    for (const char* text : {"1/48", "-3/2*l3*l5", "l3 + 2", "1/2 - l5 + 7*l3^2", "0"}) {
        const Coefficient c = Coefficient::parse(text);
        CHECK(Coefficient::parse(c.to_string()) == c);
    }
    CHECK(Coefficient::parse("(-3/2)*l3*l5") == Coefficient(make_rational(-3, 2)) * lambda_generator(3) * lambda_generator(5));
    CHECK(Coefficient::parse("l3*2 - l3 - l3").is_zero());
    CHECK_THROWS_AS(Coefficient::parse("l4"), Error);
    CHECK_THROWS_AS(Coefficient::parse("q"), ParseError);
    CHECK_THROWS_AS(Coefficient::parse("1 +"), ParseError);
}

TEST_CASE("ring axioms on random triples") {
    const ScopedLambdaWeightCap cap(16);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const Coefficient a = random_coefficient(rng), b = random_coefficient(rng), c = random_coefficient(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Coefficient());
        CHECK(a * Coefficient(1) == a);
    }
}

TEST_CASE("zeta values") {
    for (int n = 2; n <= 17; ++n) CHECK(zeta(n) == doctest::Approx(std::riemann_zeta(static_cast<double>(n))).epsilon(1e-13));
    CHECK(zeta(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
    CHECK_THROWS_AS(zeta(1), DomainError);
}

TEST_CASE("numeric evaluation") {
    const double pi = std::numbers::pi;
    const NumericValue v3 = evaluate_numeric(lambda_generator(3));
    CHECK(v3.real == doctest::Approx(0.0).epsilon(1e-18));
    // zeta(3) / (3 (2 pi i)^3) = i zeta(3) / (24 pi^3)
    CHECK(v3.imag == doctest::Approx(std::riemann_zeta(3.0) / (24 * pi * pi * pi)).epsilon(1e-12));
    CHECK(v3.imag == doctest::Approx(0.0016154).epsilon(1e-4));
    const NumericValue v5 = evaluate_numeric(lambda_generator(5));
    CHECK(v5.imag == doctest::Approx(-std::riemann_zeta(5.0) / (5 * std::pow(2 * pi, 5))).epsilon(1e-12));
    const NumericValue r = evaluate_numeric(Coefficient(make_rational(1, 48)));
    CHECK(r.real == doctest::Approx(1.0 / 48));
    CHECK(r.imag == 0.0);
    const NumericValue z = evaluate_numeric(Coefficient());
    CHECK(z.real == 0.0);
    CHECK(z.imag == 0.0);
}

TEST_CASE("numeric evaluation is multiplicative") {
    const ScopedLambdaWeightCap cap(16);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const Coefficient a = random_coefficient(rng), b = random_coefficient(rng);
        const auto ab = evaluate_numeric(a * b).as_complex();
        const auto prod = evaluate_numeric(a).as_complex() * evaluate_numeric(b).as_complex();
        CHECK(std::abs(ab - prod) <= 1e-12 * std::max(1.0, std::abs(prod)));
        const auto sum = evaluate_numeric(a + b).as_complex();
        CHECK(std::abs(sum - evaluate_numeric(a).as_complex() - evaluate_numeric(b).as_complex()) <= 1e-12);
    }
}

TEST_CASE("complex formatting") {
    CHECK(format_complex({0.5, 0.0}) == "0.5+0i");
    CHECK(format_complex({-0.0, -0.0}) == "0+0i");
    CHECK(format_complex({1.0, -2.25}) == "1-2.25i");
    CHECK(format_complex({1.0 / 3, 0.0}) == "0.333333333333+0i");
}
