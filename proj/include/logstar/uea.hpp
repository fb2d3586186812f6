#pragma once

#include "logstar/lie_algebra.hpp"
#include "logstar/poly.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace logstar {

/// Normal form with rational coefficients, as cached by the rewriter.
using RationalTerms = std::vector<std::pair<Exponents, Rational>>;

/// U(g) for a fixed Lie algebra, with the PBW basis X_1^a1 ... X_d^ad in the
/// basis order of the algebra. Holds the memo caches of the rewriting
/// X_j X_i -> X_i X_j + [X_j, X_i] (j > i); the caches are the only mutable
/// state and are guarded by a shared mutex.
class EnvelopingAlgebra {
public:
    static std::shared_ptr<const EnvelopingAlgebra> create(LieAlgebra algebra);

    const LieAlgebra& lie() const { return lie_; }
    int dim() const { return lie_.dim(); }

    /// Normal form of (PBW monomial m) * X_i.
    const RationalTerms& times_generator(const Exponents& m, int i) const;
    /// Normal form of the product of two PBW monomials.
    const RationalTerms& monomial_product(const Exponents& a, const Exponents& b) const;
    /// Normal form of the symmetrization of x^a.
    const RationalTerms& symmetrized_monomial(const Exponents& a) const;
    /// PBW^-1 of the monomial X^a, as commutative terms.
    const RationalTerms& inverse_monomial(const Exponents& a) const;

    struct CacheSizes {
        std::size_t generator_products = 0;
        std::size_t monomial_products = 0;
        std::size_t symmetrized = 0;
        std::size_t inverses = 0;
    };
    CacheSizes cache_sizes() const;

    /// Persists / restores the generator-product cache as JSON. The file is
    /// keyed by the algebra digest; a mismatching file is ignored.
    void save_cache(const std::string& path) const;
    bool load_cache(const std::string& path) const;
    /// "<digest hex>.json"
    std::string cache_file_name() const;

private:
    explicit EnvelopingAlgebra(LieAlgebra algebra) : lie_(std::move(algebra)) {}

    using GenKey = std::pair<Exponents, int>;
    using PairKey = std::pair<Exponents, Exponents>;

    template <class Map, class Key, class Fn>
    const RationalTerms& memo(Map& map, const Key& key, Fn&& compute) const;

    LieAlgebra lie_;
    mutable std::shared_mutex mutex_;
    mutable std::map<GenKey, RationalTerms> gen_cache_;
    mutable std::map<PairKey, RationalTerms> pair_cache_;
    mutable std::map<Exponents, RationalTerms> sym_cache_;
    mutable std::map<Exponents, RationalTerms> inv_cache_;
};

using EnvelopingAlgebraPtr = std::shared_ptr<const EnvelopingAlgebra>;

/// Linear combination of PBW monomials with Coefficient entries.
class UeaElement {
public:
    explicit UeaElement(EnvelopingAlgebraPtr algebra);

    static UeaElement constant(EnvelopingAlgebraPtr algebra, const Coefficient& c);
    static UeaElement generator(EnvelopingAlgebraPtr algebra, int i);

    const EnvelopingAlgebraPtr& algebra() const { return algebra_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    void add_term(const Exponents& e, const Coefficient& c);

    UeaElement& operator+=(const UeaElement& o);
    UeaElement& operator-=(const UeaElement& o);
    UeaElement& operator*=(const Coefficient& c);
    friend UeaElement operator+(UeaElement a, const UeaElement& b) { return a += b; }
    friend UeaElement operator-(UeaElement a, const UeaElement& b) { return a -= b; }
    friend UeaElement operator*(UeaElement a, const Coefficient& c) { return a *= c; }
    friend UeaElement operator*(const UeaElement& a, const UeaElement& b);
    UeaElement operator-() const;

    friend bool operator==(const UeaElement& a, const UeaElement& b);
    friend bool operator!=(const UeaElement& a, const UeaElement& b) { return !(a == b); }

private:
    void require_same_algebra(const UeaElement& o) const;
    EnvelopingAlgebraPtr algebra_;
    TermMap terms_;
};

/// Product in U(g) rewritten to PBW normal form.
UeaElement normal_form_product(const UeaElement& u, const UeaElement& v);

/// x_i1 ... x_in -> (1/n!) sum over orderings of X_i1 ... X_in.
UeaElement pbw_symmetrize(const EnvelopingAlgebraPtr& algebra, const Poly& f);

/// Inverse of pbw_symmetrize, by descent on the degree filtration.
Poly pbw_inverse(const UeaElement& u);

/// PBW^-1(PBW(f) PBW(g)).
Poly gutt_product(const EnvelopingAlgebraPtr& algebra, const Poly& f, const Poly& g);

/// PBW order, capitalized basis names, e.g. "X*Y - 1/2*Z".
std::string to_string(const UeaElement& u);

/// Same grammar as polynomials, with capitalized names; products are taken
/// in the order written, so "Y*X" parses to X*Y - Z on heisenberg3.
UeaElement parse_uea(const EnvelopingAlgebraPtr& algebra, std::string_view text);

} // namespace logstar
