#include "logstar/uea.hpp"

#include "logstar/errors.hpp"
#include "logstar/expression.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <mutex>

namespace logstar {

namespace {

using Accumulator = std::map<Exponents, Rational>;

void accumulate(Accumulator& acc, const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = acc.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

RationalTerms flatten(Accumulator&& acc) {
    RationalTerms out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc) out.emplace_back(e, std::move(c));
    return out;
}

} // namespace

std::shared_ptr<const EnvelopingAlgebra> EnvelopingAlgebra::create(LieAlgebra algebra) {
    return std::shared_ptr<const EnvelopingAlgebra>(new EnvelopingAlgebra(std::move(algebra)));
}

template <class Map, class Key, class Fn>
const RationalTerms& EnvelopingAlgebra::memo(Map& map, const Key& key, Fn&& compute) const {
    {
        std::shared_lock lock(mutex_);
        if (auto it = map.find(key); it != map.end()) return it->second;
    }
    // Computed without the lock: the recursion re-enters memo().
    RationalTerms value = compute();
    std::unique_lock lock(mutex_);
    auto [it, inserted] = map.try_emplace(key, std::move(value));
    return it->second;
}

const RationalTerms& EnvelopingAlgebra::times_generator(const Exponents& m, int i) const {
    return memo(gen_cache_, GenKey{m, i}, [&] {
        const int j = m.last_index();
        if (j <= i) {
            Exponents r = m;
            r.set(i, m[i] + 1);
            return RationalTerms{{r, Rational(1)}};
        }
        // m = m' X_j and X_j X_i = X_i X_j + [X_j, X_i].
        Exponents prefix = m;
        prefix.set(j, m[j] - 1);
        Accumulator acc;
        for (const auto& [t, c] : times_generator(prefix, i))
            for (const auto& [u, c2] : times_generator(t, j)) accumulate(acc, u, c * c2);
        for (const auto& [k, f] : lie_.bracket(j, i))
            for (const auto& [u, c2] : times_generator(prefix, k)) accumulate(acc, u, f * c2);
        return flatten(std::move(acc));
    });
}

const RationalTerms& EnvelopingAlgebra::monomial_product(const Exponents& a, const Exponents& b) const {
    return memo(pair_cache_, PairKey{a, b}, [&] {
        const int l = b.last_index();
        if (l < 0) return RationalTerms{{a, Rational(1)}};
        Exponents head = b;
        head.set(l, b[l] - 1);
        Accumulator acc;
        for (const auto& [t, c] : monomial_product(a, head))
            for (const auto& [u, c2] : times_generator(t, l)) accumulate(acc, u, c * c2);
        return flatten(std::move(acc));
    });
}

const RationalTerms& EnvelopingAlgebra::symmetrized_monomial(const Exponents& a) const {
    return memo(sym_cache_, a, [&] {
        const int n = a.degree();
        if (n == 0) return RationalTerms{{a, Rational(1)}};
        // sym(a) = sum_i (a_i / n) sym(a - e_i) X_i
        Accumulator acc;
        for (int i = 0; i < a.dim(); ++i) {
            if (a[i] == 0) continue;
            Exponents rest = a;
            rest.set(i, a[i] - 1);
            const Rational w = make_rational(a[i], n);
            for (const auto& [t, c] : symmetrized_monomial(rest))
                for (const auto& [u, c2] : times_generator(t, i)) accumulate(acc, u, w * c * c2);
        }
        return flatten(std::move(acc));
    });
}

const RationalTerms& EnvelopingAlgebra::inverse_monomial(const Exponents& a) const {
    return memo(inv_cache_, a, [&] {
        // sym(x^a) = X^a + (lower degree), so X^a = sym(x^a) - lower.
        Accumulator acc;
        accumulate(acc, a, Rational(1));
        for (const auto& [b, s] : symmetrized_monomial(a)) {
            if (b == a) continue;
            for (const auto& [e, c] : inverse_monomial(b)) accumulate(acc, e, -s * c);
        }
        return flatten(std::move(acc));
    });
}

EnvelopingAlgebra::CacheSizes EnvelopingAlgebra::cache_sizes() const {
    std::shared_lock lock(mutex_);
    return {gen_cache_.size(), pair_cache_.size(), sym_cache_.size(), inv_cache_.size()};
}

std::string EnvelopingAlgebra::cache_file_name() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(lie_.digest()));
    return std::string(buf) + ".json";
}

void EnvelopingAlgebra::save_cache(const std::string& path) const {
    using json = nlohmann::json;
    json doc;
    doc["digest"] = cache_file_name();
    doc["dim"] = dim();
    json entries = json::array();
    {
        std::shared_lock lock(mutex_);
        for (const auto& [key, terms] : gen_cache_) {
            json t = json::array();
            for (const auto& [e, c] : terms) t.push_back({e.to_vector(), to_string(c)});
            entries.push_back({{"m", key.first.to_vector()}, {"i", key.second}, {"terms", t}});
        }
    }
    doc["generator_products"] = entries;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write cache file " + path);
    out << doc.dump();
}

bool EnvelopingAlgebra::load_cache(const std::string& path) const {
    using json = nlohmann::json;
    std::ifstream in(path);
    if (!in) return false;
    json doc;
    try {
        doc = json::parse(in);
        if (doc.at("digest").get<std::string>() != cache_file_name() || doc.at("dim").get<int>() != dim()) return false;
        auto to_exponents = [&](const json& v) {
            Exponents e(dim());
            const auto vec = v.get<std::vector<int>>();
            if (static_cast<int>(vec.size()) != dim()) throw InputError("cache entry has wrong dimension");
            for (int i = 0; i < dim(); ++i) e.set(i, vec[static_cast<std::size_t>(i)]);
            return e;
        };
        std::map<GenKey, RationalTerms> loaded;
        for (const auto& entry : doc.at("generator_products")) {
            RationalTerms terms;
            for (const auto& t : entry.at("terms"))
                terms.emplace_back(to_exponents(t.at(0)), parse_rational(t.at(1).get<std::string>()));
            loaded.emplace(GenKey{to_exponents(entry.at("m")), entry.at("i").get<int>()}, std::move(terms));
        }
        std::unique_lock lock(mutex_);
        for (auto& [k, v] : loaded) gen_cache_.try_emplace(k, std::move(v));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// UeaElement

UeaElement::UeaElement(EnvelopingAlgebraPtr algebra) : algebra_(std::move(algebra)) {
    if (!algebra_) throw DomainError("UeaElement needs an enveloping algebra");
}

UeaElement UeaElement::constant(EnvelopingAlgebraPtr algebra, const Coefficient& c) {
    UeaElement u(std::move(algebra));
    u.add_term(Exponents(u.algebra_->dim()), c);
    return u;
}

UeaElement UeaElement::generator(EnvelopingAlgebraPtr algebra, int i) {
    UeaElement u(std::move(algebra));
    u.add_term(Exponents::unit(u.algebra_->dim(), i), Coefficient(1));
    return u;
}

int UeaElement::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

void UeaElement::add_term(const Exponents& e, const Coefficient& c) {
    if (e.dim() != algebra_->dim()) throw DimensionMismatch("PBW monomial dimension mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void UeaElement::require_same_algebra(const UeaElement& o) const {
    if (algebra_ != o.algebra_ && algebra_->lie().digest() != o.algebra_->lie().digest())
        throw DimensionMismatch("elements of different enveloping algebras");
}

UeaElement& UeaElement::operator+=(const UeaElement& o) {
    require_same_algebra(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

UeaElement& UeaElement::operator-=(const UeaElement& o) {
    require_same_algebra(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

UeaElement& UeaElement::operator*=(const Coefficient& c) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

UeaElement UeaElement::operator-() const {
    UeaElement u = *this;
    for (auto& [e, c] : u.terms_) c = -c;
    return u;
}

UeaElement operator*(const UeaElement& a, const UeaElement& b) {
    a.require_same_algebra(b);
    UeaElement out(a.algebra_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            const Coefficient c = ca * cb;
            for (const auto& [e, q] : a.algebra_->monomial_product(ea, eb)) out.add_term(e, c * q);
        }
    return out;
}

bool operator==(const UeaElement& a, const UeaElement& b) {
    return a.algebra_->lie().digest() == b.algebra_->lie().digest() && a.terms_ == b.terms_;
}

UeaElement normal_form_product(const UeaElement& u, const UeaElement& v) { return u * v; }

UeaElement pbw_symmetrize(const EnvelopingAlgebraPtr& algebra, const Poly& f) {
    if (f.dim() != algebra->dim()) throw DimensionMismatch("pbw_symmetrize: polynomial not in S(g)");
    UeaElement out(algebra);
    for (const auto& [e, c] : f.terms())
        for (const auto& [u, q] : algebra->symmetrized_monomial(e)) out.add_term(u, c * q);
    return out;
}

Poly pbw_inverse(const UeaElement& u) {
    const auto& alg = u.algebra();
    Poly out(alg->dim());
    for (const auto& [e, c] : u.terms())
        for (const auto& [m, q] : alg->inverse_monomial(e)) out.add_term(m, c * q);
    return out;
}

Poly gutt_product(const EnvelopingAlgebraPtr& algebra, const Poly& f, const Poly& g) {
    return pbw_inverse(pbw_symmetrize(algebra, f) * pbw_symmetrize(algebra, g));
}

std::string to_string(const UeaElement& u) {
    Poly shadow(u.algebra()->dim());
    for (const auto& [e, c] : u.terms()) shadow.add_term(e, c);
    return to_string(shadow, u.algebra()->lie().generator_names());
}

namespace {

struct UeaResolver {
    EnvelopingAlgebraPtr algebra;
    UeaElement constant(const Rational& q) const { return UeaElement::constant(algebra, Coefficient(q)); }
    UeaElement identifier(const std::string& name) const {
        const auto& gens = algebra->lie().generator_names();
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i] == name) return UeaElement::generator(algebra, static_cast<int>(i));
        if (const int n = detail::lambda_identifier_index(name); n != 0)
            return UeaElement::constant(algebra, lambda_generator(n));
        throw ParseError("unknown generator \"" + name + "\"");
    }
};

} // namespace

UeaElement parse_uea(const EnvelopingAlgebraPtr& algebra, std::string_view text) {
    UeaResolver r{algebra};
    return detail::parse_expression<UeaElement>(text, r);
}

} // namespace logstar
