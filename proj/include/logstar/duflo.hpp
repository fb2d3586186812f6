#pragma once

#include "logstar/const_op.hpp"
#include "logstar/lie_algebra.hpp"
#include "logstar/uea.hpp"

#include <string>
#include <string_view>

namespace logstar {

/// B_n with B_1 = -1/2.
Rational bernoulli(int n);

inline constexpr int kDefaultTruncation = 6;

/// The exponent coefficient of c_1 in both elements. Any value gives an
/// isomorphism, since c_1(d) is a derivation of the enveloping product.
inline Rational default_c1_coefficient() { return make_rational(-1, 4); }

/// c_n(d), the trace polynomial with d_i substituted for x_i*.
ConstOp trace_operator(const LieAlgebra& algebra, int n, int order);

/// sqrt(j)(d) = exp(a c_1 + sum_{n>=1} B_2n / (4n (2n)!) c_2n), a = -1/4 unless given.
ConstOp duflo_element(const LieAlgebra& algebra, int order);
ConstOp duflo_element(const LieAlgebra& algebra, int order, const Rational& c1_coefficient);

/// T = exp(sum_{n>=1} l_{2n+1} c_{2n+1}(d)). Orders above 17 are rejected
/// because l19 is not representable.
ConstOp equivalence_operator(const LieAlgebra& algebra, int order);

/// j_Gamma = sqrt(j) T.
ConstOp log_element(const LieAlgebra& algebra, int order);
ConstOp log_element(const LieAlgebra& algebra, int order, const Rational& c1_coefficient);

enum class StarProductKind { Standard, Logarithmic, Gutt };

std::string to_string(StarProductKind kind);
/// "standard", "logarithmic" / "log", "gutt".
StarProductKind parse_star_product_kind(std::string_view text);

struct DufloOptions {
    int truncation = kDefaultTruncation;
    Rational c1_coefficient = default_c1_coefficient();
};

/// f * g = I^-1(I(f) I(g)) with I = PBW o op(d), op fixed by the kind.
/// Operators and their inverses are built once; the enveloping algebra is
/// shared with every other engine on the same Lie algebra.
class StarProduct {
public:
    StarProduct(const LieAlgebra& algebra, StarProductKind kind, DufloOptions options = {});

    StarProductKind kind() const { return kind_; }
    const DufloOptions& options() const { return options_; }
    const EnvelopingAlgebraPtr& enveloping() const { return uea_; }
    const LieAlgebra& lie() const { return uea_->lie(); }
    const ConstOp& op() const { return op_; }
    const ConstOp& inverse_op() const { return inverse_; }

    UeaElement to_uea(const Poly& f) const;
    Poly from_uea(const UeaElement& u) const;
    /// Throws DegreeCapExceeded when deg f + deg g exceeds the truncation.
    Poly operator()(const Poly& f, const Poly& g) const;

private:
    StarProductKind kind_;
    DufloOptions options_;
    EnvelopingAlgebraPtr uea_;
    ConstOp op_;
    ConstOp inverse_;
};

/// Enveloping algebra for `algebra`, created once per digest and shared.
EnvelopingAlgebraPtr shared_enveloping_algebra(const LieAlgebra& algebra);

UeaElement iso_to_uea(const LieAlgebra& algebra, StarProductKind kind, const Poly& f, const DufloOptions& options = {});
Poly star(const LieAlgebra& algebra, StarProductKind kind, const Poly& f, const Poly& g, const DufloOptions& options = {});

/// Component of `result` in degree deg f + deg g - k, i.e. the order-k term.
/// f and g must be homogeneous and non-zero.
Poly order_component(const Poly& f, const Poly& g, const Poly& result, int k);

} // namespace logstar
