#pragma once

#include "logstar/coefficient.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logstar {

/// Exponent vector of a monomial in at most kMaxDim variables.
class Exponents {
public:
    static constexpr int kMaxDim = 12;

    Exponents() = default;
    explicit Exponents(int dim);
    Exponents(std::initializer_list<int> exps);

    static Exponents unit(int dim, int i);

    int dim() const { return dim_; }
    int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
    void set(int i, int value);
    int degree() const;
    /// Index of the last variable with a positive exponent, or -1 for 1.
    int last_index() const;

    Exponents operator+(const Exponents& o) const;
    /// Componentwise difference; requires o <= *this termwise.
    Exponents operator-(const Exponents& o) const;
    bool divides(const Exponents& o) const;

    friend bool operator==(const Exponents& a, const Exponents& b) { return a.dim_ == b.dim_ && a.e_ == b.e_; }
    friend auto operator<=>(const Exponents& a, const Exponents& b) {
        if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
        return a.e_ <=> b.e_;
    }

    std::vector<int> to_vector() const;

private:
    std::array<std::uint8_t, kMaxDim> e_{};
    std::uint8_t dim_ = 0;
};

/// Graded-lex order: lower total degree first, then lexicographic on the
/// exponent vectors. Printing walks it backwards, which gives e.g.
/// "x^2 + x*y + 1/2*z".
struct GradedOrder {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

using TermMap = std::map<Exponents, Coefficient, GradedOrder>;

/// Sparse polynomial over Coefficient in d commuting variables; an element
/// of S(g) when the variables are the basis x_1..x_d of a Lie algebra.
class Poly {
public:
    Poly() = default;
    explicit Poly(int dim) : dim_(dim) {}

    static Poly constant(int dim, const Coefficient& c);
    static Poly variable(int dim, int i);
    static Poly monomial(const Exponents& e, const Coefficient& c);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_homogeneous() const;
    Poly homogeneous_component(int degree) const;
    const TermMap& terms() const { return terms_; }
    Coefficient coefficient(const Exponents& e) const;

    /// Adds c * x^e in place.
    void add_term(const Exponents& e, const Coefficient& c);

    Poly derivative(int i) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Coefficient& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Coefficient& c) { return a *= c; }
    friend Poly operator*(const Coefficient& c, Poly a) { return a *= c; }
    Poly operator-() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void require_same_dim(const Poly& o) const;
    int dim_ = 0;
    TermMap terms_;
};

enum class PolyOp { Add, Mul };

/// Exact sum or product. Throws DimensionMismatch for different ambient dimensions.
Poly poly_arith(const Poly& f, const Poly& g, PolyOp op);

/// Element of S(g*): a polynomial in the dual coordinates. Kept as a separate
/// type so that functions on g are never confused with elements of S(g).
struct DualPoly {
    Poly poly;
    friend bool operator==(const DualPoly&, const DualPoly&) = default;
};

/// Signed sum of terms "c*l3*x^2*y", printed in descending graded order, with
/// lambda monomials expanded into separate terms.
std::string to_string(const Poly& f, std::span<const std::string> names);

/// Parses the same grammar. Identifiers resolve to basis names first, then
/// to lambda generators "l3", "l5", ...
Poly parse_poly(std::string_view text, std::span<const std::string> names);

/// Variable names "x1".."xd".
std::vector<std::string> default_variable_names(int dim);

} // namespace logstar
