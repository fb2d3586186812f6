#include "logstar/duflo.hpp"

#include "logstar/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

namespace logstar {

Rational bernoulli(int n) {
    if (n < 0) throw DomainError("Bernoulli index must be non-negative");
    // sum_{k=0}^{m} binom(m+1, k) B_k = 0
    std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational s = 0;
        mpz_class binom = 1;
        for (int k = 0; k < m; ++k) {
            s += Rational(binom) * b[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[static_cast<std::size_t>(m)] = -s / Rational(m + 1);
    }
    return b[static_cast<std::size_t>(n)];
}

ConstOp trace_operator(const LieAlgebra& algebra, int n, int order) {
    return ConstOp::from_symbol(trace_polynomial(algebra, n).poly, order);
}

namespace {

void require_order(int order) {
    if (order < 0) throw DomainError("truncation order must be non-negative");
}

} // namespace

ConstOp duflo_element(const LieAlgebra& algebra, int order) {
    return duflo_element(algebra, order, default_c1_coefficient());
}

ConstOp duflo_element(const LieAlgebra& algebra, int order, const Rational& c1_coefficient) {
    require_order(order);
    const int d = algebra.dim();
    ConstOp exponent(d, order);
    if (order >= 1) {
        const auto traces = trace_polynomials(algebra, order);
        exponent += ConstOp::from_symbol(traces[0].poly, order) * Coefficient(c1_coefficient);
        for (int n = 1; 2 * n <= order; ++n) {
            const Rational c = bernoulli(2 * n) / (Rational(4 * n) * factorial(static_cast<unsigned>(2 * n)));
            exponent += ConstOp::from_symbol(traces[static_cast<std::size_t>(2 * n - 1)].poly, order) * Coefficient(c);
        }
    }
    return exp_operator(exponent, order);
}

ConstOp equivalence_operator(const LieAlgebra& algebra, int order) {
    require_order(order);
    if (order > 17) throw DomainError("equivalence operator needs l19 beyond order 17");
    const int d = algebra.dim();
    ConstOp exponent(d, order);
    if (order >= 3) {
        const auto traces = trace_polynomials(algebra, order);
        for (int n = 3; n <= order; n += 2)
            exponent += ConstOp::from_symbol(traces[static_cast<std::size_t>(n - 1)].poly, order) * lambda_generator(n);
    }
    return exp_operator(exponent, order);
}

ConstOp log_element(const LieAlgebra& algebra, int order) {
    return log_element(algebra, order, default_c1_coefficient());
}

ConstOp log_element(const LieAlgebra& algebra, int order, const Rational& c1_coefficient) {
    return compose_operators(duflo_element(algebra, order, c1_coefficient), equivalence_operator(algebra, order));
}

std::string to_string(StarProductKind kind) {
    switch (kind) {
    case StarProductKind::Standard: return "standard";
    case StarProductKind::Logarithmic: return "logarithmic";
    case StarProductKind::Gutt: return "gutt";
    }
    return "?";
}

StarProductKind parse_star_product_kind(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "standard" || t == "kontsevich") return StarProductKind::Standard;
    if (t == "logarithmic" || t == "log") return StarProductKind::Logarithmic;
    if (t == "gutt" || t == "pbw") return StarProductKind::Gutt;
    throw InputError("unknown star product kind \"" + t + "\"");
}

EnvelopingAlgebraPtr shared_enveloping_algebra(const LieAlgebra& algebra) {
    static std::mutex mutex;
    static std::map<std::uint64_t, EnvelopingAlgebraPtr> registry;
    std::lock_guard lock(mutex);
    auto& slot = registry[algebra.digest()];
    if (!slot) slot = EnvelopingAlgebra::create(algebra);
    return slot;
}

StarProduct::StarProduct(const LieAlgebra& algebra, StarProductKind kind, DufloOptions options)
    : kind_(kind), options_(std::move(options)), uea_(shared_enveloping_algebra(algebra)) {
    const int n = options_.truncation;
    switch (kind_) {
    case StarProductKind::Standard: op_ = duflo_element(algebra, n, options_.c1_coefficient); break;
    case StarProductKind::Logarithmic: op_ = log_element(algebra, n, options_.c1_coefficient); break;
    case StarProductKind::Gutt: op_ = ConstOp::identity(algebra.dim(), n); break;
    }
    inverse_ = invert_operator(op_);
}

UeaElement StarProduct::to_uea(const Poly& f) const { return pbw_symmetrize(uea_, apply_operator(op_, f)); }

Poly StarProduct::from_uea(const UeaElement& u) const { return apply_operator(inverse_, pbw_inverse(u)); }

Poly StarProduct::operator()(const Poly& f, const Poly& g) const {
    if (f.degree() + g.degree() > options_.truncation)
        throw DegreeCapExceeded("deg f + deg g = " + std::to_string(f.degree() + g.degree()) +
                                " exceeds the truncation " + std::to_string(options_.truncation));
    return from_uea(to_uea(f) * to_uea(g));
}

UeaElement iso_to_uea(const LieAlgebra& algebra, StarProductKind kind, const Poly& f, const DufloOptions& options) {
    return StarProduct(algebra, kind, options).to_uea(f);
}

Poly star(const LieAlgebra& algebra, StarProductKind kind, const Poly& f, const Poly& g, const DufloOptions& options) {
    return StarProduct(algebra, kind, options)(f, g);
}

Poly order_component(const Poly& f, const Poly& g, const Poly& result, int k) {
    if (f.is_zero() || g.is_zero() || !f.is_homogeneous() || !g.is_homogeneous())
        throw DomainError("order_component needs non-zero homogeneous inputs");
    const int target = f.degree() + g.degree() - k;
    if (k < 0 || target < 0) return Poly(result.dim());
    return result.homogeneous_component(target);
}

} // namespace logstar
