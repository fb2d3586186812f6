#include "logstar/poly.hpp"

#include "logstar/errors.hpp"
#include "logstar/expression.hpp"

#include <algorithm>

namespace logstar {

// ---------------------------------------------------------------------------
// Exponents

Exponents::Exponents(int dim) {
    if (dim < 0 || dim > kMaxDim)
        throw DimensionMismatch("dimension " + std::to_string(dim) + " outside [0, " + std::to_string(kMaxDim) + "]");
    dim_ = static_cast<std::uint8_t>(dim);
}

Exponents::Exponents(std::initializer_list<int> exps) : Exponents(static_cast<int>(exps.size())) {
    int i = 0;
    for (int e : exps) set(i++, e);
}

Exponents Exponents::unit(int dim, int i) {
    Exponents e(dim);
    e.set(i, 1);
    return e;
}

void Exponents::set(int i, int value) {
    if (i < 0 || i >= dim_) throw DimensionMismatch("variable index out of range");
    if (value < 0 || value > 255) throw DomainError("exponent outside [0, 255]");
    e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
}

int Exponents::degree() const {
    int d = 0;
    for (int i = 0; i < dim_; ++i) d += e_[static_cast<std::size_t>(i)];
    return d;
}

int Exponents::last_index() const {
    for (int i = dim_ - 1; i >= 0; --i)
        if (e_[static_cast<std::size_t>(i)] != 0) return i;
    return -1;
}

Exponents Exponents::operator+(const Exponents& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("exponent vectors of different length");
    Exponents r(dim_);
    for (int i = 0; i < dim_; ++i) r.set(i, (*this)[i] + o[i]);
    return r;
}

Exponents Exponents::operator-(const Exponents& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("exponent vectors of different length");
    Exponents r(dim_);
    for (int i = 0; i < dim_; ++i) r.set(i, (*this)[i] - o[i]);
    return r;
}

bool Exponents::divides(const Exponents& o) const {
    for (int i = 0; i < dim_; ++i)
        if ((*this)[i] > o[i]) return false;
    return true;
}

std::vector<int> Exponents::to_vector() const {
    std::vector<int> v(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) v[static_cast<std::size_t>(i)] = (*this)[i];
    return v;
}

bool GradedOrder::operator()(const Exponents& a, const Exponents& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return a < b;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(int dim, const Coefficient& c) { return monomial(Exponents(dim), c); }

Poly Poly::variable(int dim, int i) { return monomial(Exponents::unit(dim, i), Coefficient(1)); }

Poly Poly::monomial(const Exponents& e, const Coefficient& c) {
    Poly p(e.dim());
    p.add_term(e, c);
    return p;
}

int Poly::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

bool Poly::is_homogeneous() const {
    return terms_.empty() || terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
}

Poly Poly::homogeneous_component(int degree) const {
    Poly out(dim_);
    for (const auto& [e, c] : terms_)
        if (e.degree() == degree) out.terms_.emplace_hint(out.terms_.end(), e, c);
    return out;
}

Coefficient Poly::coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coefficient() : it->second;
}

void Poly::add_term(const Exponents& e, const Coefficient& c) {
    if (e.dim() != dim_) throw DimensionMismatch("monomial dimension differs from polynomial dimension");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::derivative(int i) const {
    Poly out(dim_);
    for (const auto& [e, c] : terms_) {
        const int k = e[i];
        if (k == 0) continue;
        Exponents r = e;
        r.set(i, k - 1);
        out.add_term(r, c * Rational(k));
    }
    return out;
}

void Poly::require_same_dim(const Poly& o) const {
    if (dim_ != o.dim_)
        throw DimensionMismatch("polynomials in " + std::to_string(dim_) + " and " + std::to_string(o.dim_) +
                                " variables");
}

Poly& Poly::operator+=(const Poly& o) {
    require_same_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Coefficient& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.require_same_dim(b);
    Poly out(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

Poly poly_arith(const Poly& f, const Poly& g, PolyOp op) {
    if (f.dim() != g.dim()) throw DimensionMismatch("poly_arith on different ambient dimensions");
    return op == PolyOp::Add ? f + g : f * g;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string lambda_factors(const LambdaMonomial& m) {
    std::string out;
    for (int s = 0; s < LambdaMonomial::kMaxGenerators; ++s) {
        const int n = 2 * s + 3;
        const int e = m.exponent(n);
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += "l" + std::to_string(n);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string monomial_factors(const Exponents& e, std::span<const std::string> names) {
    std::string out;
    for (int i = 0; i < e.dim(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += names[static_cast<std::size_t>(i)];
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out;
}

struct PolyResolver {
    std::span<const std::string> names;
    int dim;
    Poly constant(const Rational& q) const { return Poly::constant(dim, Coefficient(q)); }
    Poly identifier(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return Poly::variable(dim, static_cast<int>(i));
        if (const int n = detail::lambda_identifier_index(name); n != 0)
            return Poly::constant(dim, lambda_generator(n));
        throw ParseError("unknown identifier \"" + name + "\"");
    }
};

} // namespace

std::string to_string(const Poly& f, std::span<const std::string> names) {
    if (names.size() != static_cast<std::size_t>(f.dim())) throw DimensionMismatch("wrong number of variable names");
    if (f.is_zero()) return "0";
    std::string out;
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        const std::string mono = monomial_factors(it->first, names);
        for (const auto& [lam, q] : it->second.terms()) {
            const bool negative = q < 0;
            if (out.empty())
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            const Rational mag = abs(q);
            std::string factors = lambda_factors(lam);
            if (!mono.empty()) factors += (factors.empty() ? "" : "*") + mono;
            if (factors.empty())
                out += to_string(mag);
            else if (mag == 1)
                out += factors;
            else
                out += to_string(mag) + "*" + factors;
        }
    }
    return out;
}

Poly parse_poly(std::string_view text, std::span<const std::string> names) {
    PolyResolver r{names, static_cast<int>(names.size())};
    return detail::parse_expression<Poly>(text, r);
}

std::vector<std::string> default_variable_names(int dim) {
    std::vector<std::string> names;
    for (int i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

} // namespace logstar
