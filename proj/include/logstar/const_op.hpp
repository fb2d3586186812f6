#pragma once

#include "logstar/poly.hpp"

namespace logstar {

/// Constant-coefficient differential operator sum_a c_a d^a, truncated at
/// total order N. An element of the completed S(g*) acting on S(g).
///
/// Monomials carry no implicit 1/a! factor: the term c * d_x^2 applied to x^2
/// yields 2c. exp(t d_x) is therefore stored as 1 + t d_x + (t^2/2) d_x^2 + ...
class ConstOp {
public:
    ConstOp() = default;
    ConstOp(int dim, int order);

    static ConstOp identity(int dim, int order);
    /// d/dx_i.
    static ConstOp partial(int dim, int i, int order);
    /// Substitutes d_i for the i-th dual coordinate; terms above `order` drop.
    static ConstOp from_symbol(const DualPoly& symbol, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    Coefficient constant_term() const;
    bool is_identity() const;

    /// Adds c * d^e in place (ignored if |e| > order).
    void add_term(const Exponents& e, const Coefficient& c);

    ConstOp& operator+=(const ConstOp& o);
    ConstOp& operator-=(const ConstOp& o);
    ConstOp& operator*=(const Coefficient& c);
    friend ConstOp operator+(ConstOp a, const ConstOp& b) { return a += b; }
    friend ConstOp operator-(ConstOp a, const ConstOp& b) { return a -= b; }
    friend ConstOp operator*(ConstOp a, const Coefficient& c) { return a *= c; }
    friend bool operator==(const ConstOp& a, const ConstOp& b) {
        return a.dim_ == b.dim_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    /// Symbol of the operator as an element of S(g*).
    DualPoly symbol() const;

private:
    int dim_ = 0;
    int order_ = 0;
    TermMap terms_;
};

/// sum_a c_a d^a f. Throws DegreeCapExceeded if deg f > order(D), since the
/// truncated tail could act on f.
Poly apply_operator(const ConstOp& op, const Poly& f);

/// Product in S(g*) truncated at min(N1, N2).
ConstOp compose_operators(const ConstOp& a, const ConstOp& b);

/// sum_k D^k / k! truncated at `order`. D must have zero constant term.
ConstOp exp_operator(const ConstOp& d, int order);

/// Inverse up to the truncation order. The constant term must be a non-zero
/// rational.
ConstOp invert_operator(const ConstOp& d);

} // namespace logstar
