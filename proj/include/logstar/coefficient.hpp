#pragma once

#include "logstar/rational.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logstar {

/// Monomial in the formal generators l3, l5, l7, ..., l17.
///
/// Exponents are packed one byte per generator; generator g (0-based) stands
/// for l_{2g+3}. The packing is also the canonical sort key.
class LambdaMonomial {
public:
    static constexpr int kMaxGenerators = 8;

    constexpr LambdaMonomial() = default;

    /// l_n for odd n in [3, 17].
    static LambdaMonomial generator(int n);

    int exponent(int n) const;
    /// Total weight sum(n_i) over the factors l_{n_1} ... l_{n_k}.
    int weight() const;
    bool is_one() const { return bits_ == 0; }
    std::uint64_t bits() const { return bits_; }

    LambdaMonomial operator*(const LambdaMonomial& other) const;

    friend bool operator==(LambdaMonomial a, LambdaMonomial b) { return a.bits_ == b.bits_; }
    friend bool operator<(LambdaMonomial a, LambdaMonomial b) { return a.bits_ < b.bits_; }

private:
    explicit constexpr LambdaMonomial(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

/// Upper bound on the lambda weight of any stored monomial. Process wide;
/// default 8.
int lambda_weight_cap();
void set_lambda_weight_cap(int cap);

/// RAII override of the lambda weight cap (tests, CLI flags).
class ScopedLambdaWeightCap {
public:
    explicit ScopedLambdaWeightCap(int cap) : previous_(lambda_weight_cap()) {
        set_lambda_weight_cap(cap);
    }
    ~ScopedLambdaWeightCap() { set_lambda_weight_cap(previous_); }
    ScopedLambdaWeightCap(const ScopedLambdaWeightCap&) = delete;
    ScopedLambdaWeightCap& operator=(const ScopedLambdaWeightCap&) = delete;

private:
    int previous_;
};

/// Element of Q[l3, l5, l7, ...], where l_n is a formal symbol standing for
/// zeta(n) / (n (2 pi i)^n). The odd zeta values are treated as algebraically
/// independent; this is a modelling choice, not a theorem.
///
/// Terms are kept sorted by monomial with no zero coefficients, so equality of
/// values is equality of storage.
class Coefficient {
public:
    using Term = std::pair<LambdaMonomial, Rational>;

    Coefficient() = default;
    Coefficient(const Rational& q); // NOLINT(google-explicit-constructor)
    Coefficient(long n);            // NOLINT(google-explicit-constructor)
    Coefficient(int n) : Coefficient(static_cast<long>(n)) {} // NOLINT

    static Coefficient monomial(LambdaMonomial m, const Rational& q);

    bool is_zero() const { return terms_.empty(); }
    /// True when no lambda generator occurs.
    bool is_rational() const;
    /// Coefficient of the empty lambda monomial.
    Rational rational_part() const;
    /// Highest weight over the stored monomials (0 for rationals and zero).
    int weight() const;

    const std::vector<Term>& terms() const { return terms_; }

    Coefficient& operator+=(const Coefficient& other);
    Coefficient& operator-=(const Coefficient& other);
    Coefficient& operator*=(const Coefficient& other);
    Coefficient& operator*=(const Rational& q);

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator*(Coefficient a, const Rational& q) { return a *= q; }
    friend Coefficient operator*(const Rational& q, Coefficient a) { return a *= q; }
    Coefficient operator-() const;

    friend bool operator==(const Coefficient& a, const Coefficient& b);
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    /// Canonical text, e.g. "1/48", "(-3/2)*l3*l5", "1 + 2*l3".
    std::string to_string() const;
    static Coefficient parse(std::string_view text);

private:
    void add_scaled(const Coefficient& other, int sign);
    std::vector<Term> terms_;
};

enum class CoeffOp { Add, Sub, Mul };

/// Exact ring arithmetic. Multiplication throws TruncationOverflow when a
/// product monomial exceeds the weight cap.
Coefficient coeff_arith(const Coefficient& a, const Coefficient& b, CoeffOp op);

/// The formal generator l_n. Domain: odd n >= 3 (and n <= 17).
Coefficient lambda_generator(int n);

struct NumericValue {
    double real = 0.0;
    double imag = 0.0;
    std::complex<double> as_complex() const { return {real, imag}; }
};

/// Riemann zeta at an integer argument n >= 2.
double zeta(int n);

/// zeta(n) / (n (2 pi i)^n).
std::complex<double> lambda_value(int n);

/// Substitutes l_n -> zeta(n)/(n (2 pi i)^n). Throws NumericOverflow on a
/// non-finite result.
NumericValue evaluate_numeric(const Coefficient& c);

/// "a+bi" with `digits` significant digits per part; negative zero prints as 0.
std::string format_complex(std::complex<double> z, int digits = 12);

} // namespace logstar
