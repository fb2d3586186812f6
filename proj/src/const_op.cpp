#include "logstar/const_op.hpp"

#include "logstar/errors.hpp"

#include <algorithm>

namespace logstar {

ConstOp::ConstOp(int dim, int order) : dim_(dim), order_(order) {
    if (order < 0) throw DomainError("operator truncation order must be non-negative");
    Exponents check(dim);
    (void)check;
}

ConstOp ConstOp::identity(int dim, int order) {
    ConstOp op(dim, order);
    op.add_term(Exponents(dim), Coefficient(1));
    return op;
}

ConstOp ConstOp::partial(int dim, int i, int order) {
    ConstOp op(dim, order);
    op.add_term(Exponents::unit(dim, i), Coefficient(1));
    return op;
}

ConstOp ConstOp::from_symbol(const DualPoly& symbol, int order) {
    ConstOp op(symbol.poly.dim(), order);
    for (const auto& [e, c] : symbol.poly.terms()) op.add_term(e, c);
    return op;
}

Coefficient ConstOp::constant_term() const {
    auto it = terms_.find(Exponents(dim_));
    return it == terms_.end() ? Coefficient() : it->second;
}

bool ConstOp::is_identity() const {
    return terms_.size() == 1 && terms_.begin()->first.degree() == 0 && terms_.begin()->second == Coefficient(1);
}

void ConstOp::add_term(const Exponents& e, const Coefficient& c) {
    if (e.dim() != dim_) throw DimensionMismatch("operator monomial dimension mismatch");
    if (e.degree() > order_ || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ConstOp& ConstOp::operator+=(const ConstOp& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("operators on different dimensions");
    order_ = std::min(order_, o.order_);
    std::erase_if(terms_, [&](const auto& t) { return t.first.degree() > order_; });
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

ConstOp& ConstOp::operator-=(const ConstOp& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("operators on different dimensions");
    order_ = std::min(order_, o.order_);
    std::erase_if(terms_, [&](const auto& t) { return t.first.degree() > order_; });
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

ConstOp& ConstOp::operator*=(const Coefficient& c) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

DualPoly ConstOp::symbol() const {
    Poly p(dim_);
    for (const auto& [e, c] : terms_) p.add_term(e, c);
    return DualPoly{std::move(p)};
}

Poly apply_operator(const ConstOp& op, const Poly& f) {
    if (op.dim() != f.dim()) throw DimensionMismatch("operator and polynomial dimensions differ");
    if (f.degree() > op.order())
        throw DegreeCapExceeded("polynomial of degree " + std::to_string(f.degree()) +
                                " exceeds operator truncation order " + std::to_string(op.order()));
    Poly out(f.dim());
    for (const auto& [alpha, c] : op.terms()) {
        for (const auto& [e, fc] : f.terms()) {
            if (!alpha.divides(e)) continue;
            // d^alpha x^e = prod_i e_i! / (e_i - alpha_i)! x^(e - alpha)
            mpz_class falling = 1;
            for (int i = 0; i < e.dim(); ++i)
                for (int k = 0; k < alpha[i]; ++k) falling *= e[i] - k;
            out.add_term(e - alpha, (c * fc) * Rational(falling));
        }
    }
    return out;
}

ConstOp compose_operators(const ConstOp& a, const ConstOp& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operators on different dimensions");
    ConstOp out(a.dim(), std::min(a.order(), b.order()));
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            if (ea.degree() + eb.degree() > out.order()) continue;
            out.add_term(ea + eb, ca * cb);
        }
    }
    return out;
}

ConstOp exp_operator(const ConstOp& d, int order) {
    if (!d.constant_term().is_zero()) throw DomainError("exp_operator requires zero constant term");
    ConstOp base(d.dim(), order);
    for (const auto& [e, c] : d.terms()) base.add_term(e, c);
    ConstOp result = ConstOp::identity(d.dim(), order);
    ConstOp power = ConstOp::identity(d.dim(), order);
    // Each factor raises the minimal order by at least one, so k <= order.
    for (int k = 1; k <= order; ++k) {
        power = compose_operators(power, base);
        if (power.terms().empty()) break;
        result += power * Coefficient(Rational(1) / factorial(static_cast<unsigned>(k)));
    }
    return result;
}

ConstOp invert_operator(const ConstOp& d) {
    const Coefficient c0 = d.constant_term();
    if (c0.is_zero() || !c0.is_rational()) throw DomainError("operator constant term is not an invertible rational");
    const Rational inv0 = Rational(1) / c0.rational_part();
    // d = c0 (1 - e) with e of order >= 1; d^-1 = c0^-1 sum_k e^k.
    ConstOp e = ConstOp::identity(d.dim(), d.order()) - d * Coefficient(inv0);
    ConstOp result = ConstOp::identity(d.dim(), d.order());
    ConstOp power = ConstOp::identity(d.dim(), d.order());
    for (int k = 1; k <= d.order(); ++k) {
        power = compose_operators(power, e);
        if (power.terms().empty()) break;
        result += power;
    }
    return result * Coefficient(inv0);
}

} // namespace logstar
