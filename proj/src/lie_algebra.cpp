#include "logstar/lie_algebra.hpp"

#include "logstar/errors.hpp"
#include "logstar/expression.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace logstar {

namespace {

using json = nlohmann::json;

void validate_names(const std::vector<std::string>& basis) {
    std::set<std::string> seen;
    std::set<std::string> capitalized;
    for (const auto& n : basis) {
        if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
            throw InputError("basis name \"" + n + "\" is not an identifier");
        for (char c : n)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw InputError("basis name \"" + n + "\" is not an identifier");
        if (detail::lambda_identifier_index(n) != 0)
            throw InputError("basis name \"" + n + "\" collides with a lambda generator");
        if (!seen.insert(n).second) throw InputError("duplicate basis name \"" + n + "\"");
        std::string cap = n;
        cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
        if (!capitalized.insert(cap).second)
            throw InputError("basis names collide after capitalization: \"" + cap + "\"");
    }
}

std::string index_name(const std::vector<std::string>& basis, int i) {
    return std::to_string(i + 1) + " (" + basis[static_cast<std::size_t>(i)] + ")";
}

} // namespace

LieAlgebra LieAlgebra::from_brackets(std::string name, std::vector<std::string> basis,
                                     const std::vector<BracketEntry>& brackets) {
    const int d = static_cast<int>(basis.size());
    if (d < 1 || d > Exponents::kMaxDim)
        throw InputError("dimension must lie in [1, " + std::to_string(Exponents::kMaxDim) + "]");
    std::vector<Rational> table(static_cast<std::size_t>(d * d * d));
    std::set<std::pair<int, int>> seen;
    for (const auto& b : brackets) {
        if (b.i < 0 || b.j < 0 || b.i >= d || b.j >= d) throw InputError("bracket index out of range");
        if (b.i >= b.j) throw InputError("only brackets with i < j are accepted");
        if (!seen.insert({b.i, b.j}).second) throw InputError("bracket [x_i, x_j] listed twice");
        for (const auto& t : b.terms) {
            if (t.k < 0 || t.k >= d) throw InputError("bracket term index out of range");
            table[static_cast<std::size_t>((b.i * d + b.j) * d + t.k)] += t.c;
            table[static_cast<std::size_t>((b.j * d + b.i) * d + t.k)] -= t.c;
        }
    }
    return from_structure_constants(std::move(name), std::move(basis), std::move(table));
}

LieAlgebra LieAlgebra::from_structure_constants(std::string name, std::vector<std::string> basis,
                                                std::vector<Rational> table) {
    const int d = static_cast<int>(basis.size());
    if (d < 1 || d > Exponents::kMaxDim)
        throw InputError("dimension must lie in [1, " + std::to_string(Exponents::kMaxDim) + "]");
    if (table.size() != static_cast<std::size_t>(d * d * d))
        throw DimensionMismatch("structure constant table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(d * d * d));
    validate_names(basis);
    LieAlgebra L;
    L.name_ = std::move(name);
    L.dim_ = d;
    L.basis_ = std::move(basis);
    L.table_ = std::move(table);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (L.structure_constant(i, j, k) != -L.structure_constant(j, i, k))
                    throw AntisymmetryViolation(i + 1, j + 1, k + 1,
                                                "antisymmetry fails: f_ij^k != -f_ji^k at i=" + index_name(L.basis_, i) +
                                                    ", j=" + index_name(L.basis_, j) + ", k=" + index_name(L.basis_, k));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    Rational s = 0;
                    for (int m = 0; m < d; ++m) {
                        s += L.structure_constant(i, j, m) * L.structure_constant(m, k, l);
                        s += L.structure_constant(j, k, m) * L.structure_constant(m, i, l);
                        s += L.structure_constant(k, i, m) * L.structure_constant(m, j, l);
                    }
                    if (s != 0)
                        throw JacobiViolation(i + 1, j + 1, k + 1, l + 1,
                                              "Jacobi identity fails: coefficient of x_l in "
                                              "[[x_i,x_j],x_k] + cyclic is " +
                                                  to_string(s) + " at i=" + index_name(L.basis_, i) +
                                                  ", j=" + index_name(L.basis_, j) + ", k=" + index_name(L.basis_, k) +
                                                  ", l=" + index_name(L.basis_, l));
                }
    L.finish();
    return L;
}

void LieAlgebra::finish() {
    generators_ = basis_;
    for (auto& g : generators_) g[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(g[0])));
    sparse_.assign(static_cast<std::size_t>(dim_ * dim_), {});
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                if (const auto& c = structure_constant(i, j, k); c != 0)
                    sparse_[static_cast<std::size_t>(i * dim_ + j)].emplace_back(k, c);
}

bool LieAlgebra::is_abelian() const {
    for (const auto& s : sparse_)
        if (!s.empty()) return false;
    return true;
}

std::string LieAlgebra::canonical_form() const {
    std::ostringstream out;
    out << "dim " << dim_ << "\n";
    for (const auto& b : basis_) out << b << "\n";
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            for (const auto& [k, c] : bracket(i, j)) out << i << " " << j << " " << k << " " << to_string(c) << "\n";
    return out.str();
}

std::uint64_t LieAlgebra::digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_form()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// JSON

LieAlgebra parse_lie_algebra_json(std::string_view text, std::string name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("algebra file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw InputError("algebra description must be a JSON object");
        const int d = doc.at("dim").get<int>();
        auto basis = doc.at("basis").get<std::vector<std::string>>();
        if (static_cast<int>(basis.size()) != d)
            throw DimensionMismatch("\"dim\" is " + std::to_string(d) + " but " + std::to_string(basis.size()) +
                                    " basis names were given");
        if (doc.contains("name") && name == "custom") name = doc.at("name").get<std::string>();
        std::vector<BracketEntry> brackets;
        if (doc.contains("brackets")) {
            for (const auto& b : doc.at("brackets")) {
                BracketEntry e;
                e.i = b.at("i").get<int>() - 1;
                e.j = b.at("j").get<int>() - 1;
                for (const auto& t : b.at("terms")) {
                    const auto& c = t.at("c");
                    Rational q = c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>());
                    e.terms.push_back({t.at("k").get<int>() - 1, q});
                }
                brackets.push_back(std::move(e));
            }
        }
        return LieAlgebra::from_brackets(std::move(name), std::move(basis), brackets);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed algebra description: ") + e.what());
    } catch (const ParseError& e) {
        throw InputError(std::string("malformed rational in algebra description: ") + e.what());
    }
}

std::string lie_algebra_to_json(const LieAlgebra& L) {
    json doc;
    doc["name"] = L.name();
    doc["dim"] = L.dim();
    doc["basis"] = L.basis_names();
    json brackets = json::array();
    for (int i = 0; i < L.dim(); ++i) {
        for (int j = i + 1; j < L.dim(); ++j) {
            if (L.bracket(i, j).empty()) continue;
            json terms = json::array();
            for (const auto& [k, c] : L.bracket(i, j)) terms.push_back({{"k", k + 1}, {"c", to_string(c)}});
            brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"terms", terms}});
        }
    }
    doc["brackets"] = brackets;
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

BracketEntry br(int i, int j, std::vector<BracketTerm> terms) { return {i, j, std::move(terms)}; }

} // namespace

LieAlgebra builtin_algebra(std::string_view name) {
    if (name.starts_with("abelian")) {
        const std::string_view rest = name.substr(7);
        int d = 0;
        for (char c : rest) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("unknown built-in algebra");
            d = d * 10 + (c - '0');
            if (d > Exponents::kMaxDim) break;
        }
        if (rest.empty() || d < 1 || d > Exponents::kMaxDim)
            throw InputError("abelian<d> needs 1 <= d <= " + std::to_string(Exponents::kMaxDim));
        return LieAlgebra::from_brackets(std::string(name), default_variable_names(d), {});
    }
    if (name == "heisenberg3") // [x,y] = z
        return LieAlgebra::from_brackets("heisenberg3", {"x", "y", "z"}, {br(0, 1, {{2, 1}})});
    if (name == "aff1") // [x,y] = y
        return LieAlgebra::from_brackets("aff1", {"x", "y"}, {br(0, 1, {{1, 1}})});
    if (name == "sl2") // [e,f] = h, [e,h] = -2e, [f,h] = 2f
        return LieAlgebra::from_brackets("sl2", {"e", "f", "h"},
                                         {br(0, 1, {{2, 1}}), br(0, 2, {{0, -2}}), br(1, 2, {{1, 2}})});
    if (name == "gl2") // sl2 plus a central z
        return LieAlgebra::from_brackets("gl2", {"e", "f", "h", "z"},
                                         {br(0, 1, {{2, 1}}), br(0, 2, {{0, -2}}), br(1, 2, {{1, 2}})});
    if (name == "t2") // upper triangular 2x2: a = E11, b = E12, c = E22
        return LieAlgebra::from_brackets("t2", {"a", "b", "c"}, {br(0, 1, {{1, 1}}), br(1, 2, {{1, 1}})});
    throw InputError("unknown built-in algebra \"" + std::string(name) + "\"");
}

std::vector<std::string> builtin_algebra_names() {
    return {"abelian2", "abelian3", "heisenberg3", "aff1", "sl2", "gl2", "t2"};
}

LieAlgebra load_lie_algebra(std::string_view name_or_path) {
    const std::string key(name_or_path);
    const bool builtin = key.starts_with("abelian") || key == "heisenberg3" || key == "aff1" || key == "sl2" ||
                         key == "gl2" || key == "t2";
    if (builtin) return builtin_algebra(key);
    std::ifstream in(key);
    if (!in) throw InputError("\"" + key + "\" is neither a built-in algebra nor a readable file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_lie_algebra_json(buf.str(), key);
}

// ---------------------------------------------------------------------------
// Adjoint representation

RationalMatrix adjoint_matrix(const LieAlgebra& L, std::span<const Rational> coeffs) {
    const int d = L.dim();
    if (static_cast<int>(coeffs.size()) != d) throw DimensionMismatch("adjoint_matrix needs dim coefficients");
    RationalMatrix m(static_cast<std::size_t>(d), std::vector<Rational>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
        if (coeffs[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j < d; ++j)
            for (const auto& [k, c] : L.bracket(i, j))
                m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] += coeffs[static_cast<std::size_t>(i)] * c;
    }
    return m;
}

std::vector<TracePolynomial> trace_polynomials(const LieAlgebra& L, int nmax) {
    if (nmax < 1) throw DomainError("trace polynomials are indexed by n >= 1");
    const int d = L.dim();
    using PolyMatrix = std::vector<std::vector<Poly>>;
    // Symbolic ad(xi) with xi = sum xi_i x_i: entry (k, j) = sum_i xi_i f_ij^k.
    PolyMatrix ad(static_cast<std::size_t>(d), std::vector<Poly>(static_cast<std::size_t>(d), Poly(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (const auto& [k, c] : L.bracket(i, j))
                ad[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] += Poly::variable(d, i) * Coefficient(c);

    std::vector<TracePolynomial> out;
    PolyMatrix power = ad;
    for (int n = 1; n <= nmax; ++n) {
        if (n > 1) {
            PolyMatrix next(static_cast<std::size_t>(d), std::vector<Poly>(static_cast<std::size_t>(d), Poly(d)));
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) {
                    const Poly& a = power[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
                    if (a.is_zero()) continue;
                    for (int t = 0; t < d; ++t) {
                        const Poly& b = ad[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
                        if (!b.is_zero()) next[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] += a * b;
                    }
                }
            power = std::move(next);
        }
        Poly tr(d);
        for (int r = 0; r < d; ++r) tr += power[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
        out.push_back({n, DualPoly{std::move(tr)}});
    }
    return out;
}

TracePolynomial trace_polynomial(const LieAlgebra& L, int n) { return trace_polynomials(L, n).back(); }

Poly poisson_bracket(const LieAlgebra& L, const Poly& f, const Poly& g) {
    const int d = L.dim();
    if (f.dim() != d || g.dim() != d) throw DimensionMismatch("poisson_bracket arguments must live in S(g)");
    std::vector<Poly> df, dg;
    for (int i = 0; i < d; ++i) {
        df.push_back(f.derivative(i));
        dg.push_back(g.derivative(i));
    }
    Poly out(d);
    for (int i = 0; i < d; ++i) {
        if (df[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; j < d; ++j) {
            if (dg[static_cast<std::size_t>(j)].is_zero() || L.bracket(i, j).empty()) continue;
            Poly lin(d);
            for (const auto& [k, c] : L.bracket(i, j)) lin.add_term(Exponents::unit(d, k), Coefficient(c));
            out += lin * df[static_cast<std::size_t>(i)] * dg[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

} // namespace logstar
