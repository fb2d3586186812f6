#include "logstar/cli.hpp"

#include "logstar/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace logstar::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    Stopwatch(RunReport& report, bool enabled) : report_(report), enabled_(enabled), start_(Clock::now()) {}
    void lap(const std::string& name) {
        if (!enabled_) return;
        const auto now = Clock::now();
        report_.timings.emplace_back(name, std::chrono::duration<double>(now - start_).count());
        start_ = now;
    }

private:
    RunReport& report_;
    bool enabled_;
    Clock::time_point start_;
};

// Loads the rewriting cache on construction and writes it back on save().
class CacheScope {
public:
    CacheScope(const EnvelopingAlgebraPtr& uea, const CommonOptions& common) : uea_(uea) {
        std::string dir = common.cache_dir;
        if (dir.empty())
            if (const char* env = std::getenv("QUANT_CACHE_DIR")) dir = env;
        if (dir.empty()) return;
        path_ = (std::filesystem::path(dir) / uea_->cache_file_name()).string();
        uea_->load_cache(path_);
    }
    void save() const {
        if (path_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(std::filesystem::path(path_).parent_path(), ec);
        uea_->save_cache(path_);
    }

private:
    EnvelopingAlgebraPtr uea_;
    std::string path_;
};

// Structural violations are input errors outside check-algebra.
LieAlgebra load_algebra_or_throw(const std::string& name) {
    try {
        return load_lie_algebra(name);
    } catch (const JacobiViolation& e) {
        throw InputError(std::string("invalid Lie algebra: ") + e.what());
    } catch (const AntisymmetryViolation& e) {
        throw InputError(std::string("invalid Lie algebra: ") + e.what());
    }
}

std::vector<std::string> dual_names(const LieAlgebra& L) {
    std::vector<std::string> out;
    for (const auto& n : L.basis_names()) out.push_back("d" + n);
    return out;
}

// ---------------------------------------------------------------------------
// Random inputs

class InputGenerator {
public:
    InputGenerator(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Poly monomial(int degree) {
        Exponents e(dim_);
        for (int k = 0; k < degree; ++k) {
            const int i = uniform(0, dim_ - 1);
            e.set(i, e[i] + 1);
        }
        int c = uniform(-3, 2);
        if (c >= 0) ++c;
        return Poly::monomial(e, Coefficient(c));
    }

    /// Sum of up to three monomials, each of degree <= max_degree.
    Poly polynomial(int max_degree) {
        Poly p(dim_);
        const int terms = uniform(1, 3);
        for (int t = 0; t < terms; ++t) p += monomial(uniform(0, max_degree));
        return p;
    }

    /// Degrees of `parts` factors with total <= cap.
    std::vector<int> split(int parts, int cap) {
        std::vector<int> degrees(static_cast<std::size_t>(parts), 0);
        const int total = uniform(0, cap);
        for (int k = 0; k < total; ++k) ++degrees[static_cast<std::size_t>(uniform(0, parts - 1))];
        return degrees;
    }

private:
    int dim_;
    std::mt19937_64 rng_;
};

struct SuiteContext {
    const LieAlgebra& algebra;
    const VerifyRequest& request;
    std::vector<std::string> names;
};

// Runs `trials` instances of an identity; records the first failure.
template <class Trial>
CheckResult run_trials(const std::string& name, int trials, Trial&& trial) {
    CheckResult r;
    r.name = name;
    int passed = 0;
    for (int t = 0; t < trials; ++t) {
        json witness;
        if (trial(witness)) {
            ++passed;
        } else if (r.passed) {
            r.passed = false;
            witness["trial"] = t;
            r.witness = witness;
        }
    }
    r.detail = std::to_string(passed) + "/" + std::to_string(trials) + " trials";
    return r;
}

std::vector<CheckResult> suite_assoc(const SuiteContext& ctx) {
    std::vector<CheckResult> out;
    const auto& n = ctx.names;
    for (auto kind : {StarProductKind::Standard, StarProductKind::Logarithmic, StarProductKind::Gutt}) {
        const StarProduct star(ctx.algebra, kind, {ctx.request.cap});
        InputGenerator gen(ctx.algebra.dim(), ctx.request.seed);
        out.push_back(run_trials("assoc/" + to_string(kind), ctx.request.trials, [&](json& w) {
            const auto d = gen.split(3, ctx.request.cap);
            const Poly f = gen.monomial(d[0]), g = gen.monomial(d[1]), h = gen.monomial(d[2]);
            const Poly lhs = star(star(f, g), h), rhs = star(f, star(g, h));
            if (lhs == rhs) return true;
            w = {{"f", to_string(f, n)}, {"g", to_string(g, n)}, {"h", to_string(h, n)},
                 {"lhs", to_string(lhs, n)}, {"rhs", to_string(rhs, n)}};
            return false;
        }));
    }
    return out;
}

std::vector<CheckResult> suite_derivation(const SuiteContext& ctx) {
    const auto c1 = trace_polynomial(ctx.algebra, 1);
    if (c1.poly.poly.is_zero()) return {{"derivation", true, "vacuous: c1 = 0", nullptr}};
    const ConstOp D = ConstOp::from_symbol(c1.poly, ctx.request.cap);
    const auto& n = ctx.names;
    std::vector<CheckResult> out;
    for (auto kind : {StarProductKind::Standard, StarProductKind::Logarithmic}) {
        const StarProduct star(ctx.algebra, kind, {ctx.request.cap});
        InputGenerator gen(ctx.algebra.dim(), ctx.request.seed);
        out.push_back(run_trials("derivation/" + to_string(kind), ctx.request.trials, [&](json& w) {
            const auto d = gen.split(2, ctx.request.cap);
            const Poly f = gen.monomial(d[0]), g = gen.monomial(d[1]);
            const Poly lhs = apply_operator(D, star(f, g));
            const Poly rhs = star(apply_operator(D, f), g) + star(f, apply_operator(D, g));
            if (lhs == rhs) return true;
            w = {{"f", to_string(f, n)}, {"g", to_string(g, n)}, {"lhs", to_string(lhs, n)}, {"rhs", to_string(rhs, n)}};
            return false;
        }));
    }
    return out;
}

std::vector<CheckResult> suite_equivalence(const SuiteContext& ctx) {
    const int cap = ctx.request.cap;
    const ConstOp T = equivalence_operator(ctx.algebra, cap);
    const StarProduct standard(ctx.algebra, StarProductKind::Standard, {cap});
    const StarProduct log(ctx.algebra, StarProductKind::Logarithmic, {cap});
    const auto& n = ctx.names;
    InputGenerator gen(ctx.algebra.dim(), ctx.request.seed);
    auto r = run_trials("equivalence", ctx.request.trials, [&](json& w) {
        const auto d = gen.split(2, cap);
        const Poly f = gen.monomial(d[0]), g = gen.monomial(d[1]);
        const Poly lhs = apply_operator(T, log(f, g));
        const Poly rhs = standard(apply_operator(T, f), apply_operator(T, g));
        if (lhs == rhs) return true;
        w = {{"f", to_string(f, n)}, {"g", to_string(g, n)}, {"lhs", to_string(lhs, n)}, {"rhs", to_string(rhs, n)}};
        return false;
    });
    if (T.is_identity()) r.detail += " (T = identity: odd traces vanish)";
    return {r};
}

std::vector<CheckResult> suite_nilpotent_collapse(const SuiteContext& ctx) {
    const int cap = ctx.request.cap;
    const ConstOp duflo = duflo_element(ctx.algebra, cap);
    std::vector<CheckResult> out;
    CheckResult id{"duflo-identity", duflo.is_identity(), "", nullptr};
    id.detail = duflo.is_identity() ? "sqrt(j) = 1" : "sqrt(j) != 1";
    if (!id.passed) id.witness = {{"duflo", to_string(duflo.symbol().poly, dual_names(ctx.algebra))}};
    out.push_back(id);
    const StarProduct standard(ctx.algebra, StarProductKind::Standard, {cap});
    const StarProduct log(ctx.algebra, StarProductKind::Logarithmic, {cap});
    const StarProduct gutt(ctx.algebra, StarProductKind::Gutt, {cap});
    const auto& n = ctx.names;
    const auto compare = [&](const std::string& name, const StarProduct& a, const StarProduct& b) {
        InputGenerator gen(ctx.algebra.dim(), ctx.request.seed);
        return run_trials(name, ctx.request.trials, [&](json& w) {
            const auto d = gen.split(2, cap);
            const Poly f = gen.monomial(d[0]), g = gen.monomial(d[1]);
            const Poly x = a(f, g), y = b(f, g);
            if (x == y) return true;
            w = {{"f", to_string(f, n)}, {"g", to_string(g, n)}, {to_string(a.kind()), to_string(x, n)},
                 {to_string(b.kind()), to_string(y, n)}};
            return false;
        });
    };
    out.push_back(compare("standard=logarithmic", standard, log));
    out.push_back(compare("logarithmic=gutt", log, gutt));
    return out;
}

std::vector<CheckResult> suite_pbw(const SuiteContext& ctx) {
    const auto uea = shared_enveloping_algebra(ctx.algebra);
    const int max_degree = std::min(ctx.request.cap, 5);
    const auto& n = ctx.names;
    InputGenerator gen(ctx.algebra.dim(), ctx.request.seed);
    std::vector<CheckResult> out;
    out.push_back(run_trials("pbw/inverse-after-symmetrize", ctx.request.trials, [&](json& w) {
        const Poly f = gen.polynomial(max_degree);
        const Poly back = pbw_inverse(pbw_symmetrize(uea, f));
        if (back == f) return true;
        w = {{"f", to_string(f, n)}, {"result", to_string(back, n)}};
        return false;
    }));
    out.push_back(run_trials("pbw/symmetrize-after-inverse", ctx.request.trials, [&](json& w) {
        const Poly shape = gen.polynomial(max_degree);
        UeaElement u(uea);
        for (const auto& [e, c] : shape.terms()) u.add_term(e, c);
        const UeaElement back = pbw_symmetrize(uea, pbw_inverse(u));
        if (back == u) return true;
        w = {{"u", to_string(u)}, {"result", to_string(back)}};
        return false;
    }));
    return out;
}

void add_algebra_info(json& data, const LieAlgebra& L) {
    data["algebra"] = L.name();
    data["dim"] = L.dim();
    data["digest"] = digest_hex(L.canonical_form());
}

json poly_orders(const Poly& f, const Poly& g, const StarProduct& star, const std::vector<std::string>& names) {
    // Order-k part of f * g, summed over homogeneous parts of the inputs.
    std::map<int, Poly> by_order;
    for (int a = 0; a <= std::max(f.degree(), 0); ++a) {
        const Poly fa = f.homogeneous_component(a);
        if (fa.is_zero()) continue;
        for (int b = 0; b <= std::max(g.degree(), 0); ++b) {
            const Poly gb = g.homogeneous_component(b);
            if (gb.is_zero()) continue;
            const Poly r = star(fa, gb);
            for (int k = 0; k <= a + b; ++k) {
                const Poly c = order_component(fa, gb, r, k);
                if (c.is_zero()) continue;
                auto [it, inserted] = by_order.try_emplace(k, c);
                if (!inserted) it->second += c;
            }
        }
    }
    json out = json::array();
    for (const auto& [k, p] : by_order)
        if (!p.is_zero()) out.push_back({{"order", k}, {"component", to_string(p, names)}});
    return out;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

} // namespace

std::string digest_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json to_json(const RunReport& report) {
    json j;
    j["command"] = report.command;
    j["inputs_digest"] = report.inputs_digest;
    j["seed"] = report.seed;
    j["status"] = report.passed() ? "pass" : "fail";
    json checks = json::array();
    for (const auto& c : report.checks) {
        json cj{{"name", c.name}, {"status", c.passed ? "pass" : "fail"}, {"detail", c.detail}};
        if (!c.passed) cj["witness"] = c.witness;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["data"] = report.data;
    if (!report.timings.empty()) {
        json t = json::object();
        for (const auto& [name, seconds] : report.timings) t[name] = seconds;
        j["timings"] = t;
    }
    return j;
}

std::string render_text(const RunReport& report) {
    std::ostringstream out;
    out << "command: " << report.command << "\n";
    out << "inputs:  " << report.inputs_digest << "\n";
    if (report.seed) out << "seed:    " << report.seed << "\n";
    for (const auto& [key, value] : report.data.items()) {
        if (value.is_array()) {
            out << key << ":\n";
            for (const auto& row : value) {
                out << "  ";
                if (row.is_object()) {
                    bool first = true;
                    for (const auto& [k, v] : row.items()) {
                        out << (first ? "" : "  ") << k << "=" << scalar_text(v);
                        first = false;
                    }
                } else {
                    out << scalar_text(row);
                }
                out << "\n";
            }
        } else {
            out << key << ": " << scalar_text(value) << "\n";
        }
    }
    for (const auto& c : report.checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) out << "  " << c.detail;
        out << "\n";
        if (!c.passed && !c.witness.is_null())
            for (const auto& [k, v] : c.witness.items()) out << "    " << k << ": " << scalar_text(v) << "\n";
    }
    for (const auto& [name, seconds] : report.timings) out << "time " << name << ": " << seconds << " s\n";
    out << "result: " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

RunReport cmd_list_algebras() {
    RunReport r;
    r.command = "list-algebras";
    json rows = json::array();
    for (const auto& name : builtin_algebra_names()) {
        const LieAlgebra L = builtin_algebra(name);
        std::string basis;
        for (const auto& b : L.basis_names()) basis += (basis.empty() ? "" : ",") + b;
        rows.push_back({{"name", name}, {"dim", L.dim()}, {"basis", basis}});
    }
    r.data["algebras"] = rows;
    r.inputs_digest = digest_hex("list-algebras");
    return r;
}

RunReport cmd_check_algebra(const std::string& algebra, const CommonOptions& common) {
    RunReport r;
    r.command = "check-algebra";
    Stopwatch clock(r, common.timings);
    r.inputs_digest = digest_hex("check-algebra\n" + algebra);
    try {
        const LieAlgebra L = load_lie_algebra(algebra);
        r.inputs_digest = digest_hex("check-algebra\n" + L.canonical_form());
        add_algebra_info(r.data, L);
        std::string basis;
        for (const auto& b : L.basis_names()) basis += (basis.empty() ? "" : ",") + b;
        r.data["basis"] = basis;
        const auto traces = trace_polynomials(L, L.dim());
        const auto duals = dual_names(L);
        json tr = json::array();
        bool nilpotent = true;
        for (const auto& t : traces) {
            nilpotent = nilpotent && t.poly.poly.is_zero();
            if (t.n <= 3) tr.push_back({{"n", t.n}, {"c", to_string(t.poly.poly, duals)}});
        }
        r.data["traces"] = tr;
        r.data["c1_nonzero"] = !traces.front().poly.poly.is_zero();
        r.data["unimodular"] = traces.front().poly.poly.is_zero();
        // tr ad(x)^k = 0 for k <= d makes every ad(x) nilpotent (Engel).
        r.data["nilpotent"] = nilpotent;
        r.checks.push_back({"antisymmetry", true, "", nullptr});
        r.checks.push_back({"jacobi", true, "", nullptr});
    } catch (const AntisymmetryViolation& e) {
        const auto& w = e.witness;
        r.checks.push_back({"antisymmetry", false, e.what(), json{{"i", w[0]}, {"j", w[1]}, {"k", w[2]}}});
    } catch (const JacobiViolation& e) {
        const auto& w = e.witness;
        r.checks.push_back({"antisymmetry", true, "", nullptr});
        r.checks.push_back({"jacobi", false, e.what(), json{{"i", w[0]}, {"j", w[1]}, {"k", w[2]}, {"l", w[3]}}});
    }
    clock.lap("check");
    return r;
}

RunReport cmd_star(const StarRequest& req, const CommonOptions& common) {
    RunReport r;
    r.command = "star";
    Stopwatch clock(r, common.timings);
    const LieAlgebra L = load_algebra_or_throw(req.algebra);
    const auto& names = L.basis_names();
    const ScopedLambdaWeightCap weight_cap(std::max(lambda_weight_cap(), req.cap));
    const Poly f = parse_poly(req.f, names);
    const Poly g = parse_poly(req.g, names);
    const StarProduct star(L, req.kind, {req.cap});
    CacheScope cache(star.enveloping(), common);
    r.inputs_digest = digest_hex("star\n" + L.canonical_form() + "\n" + to_string(req.kind) + "\n" + to_string(f, names) +
                                 "\n" + to_string(g, names) + "\n" + std::to_string(req.cap));
    clock.lap("setup");
    const Poly result = star(f, g);
    clock.lap("product");
    add_algebra_info(r.data, L);
    r.data["kind"] = to_string(req.kind);
    r.data["cap"] = req.cap;
    r.data["f"] = to_string(f, names);
    r.data["g"] = to_string(g, names);
    r.data["result"] = to_string(result, names);
    if (req.orders) {
        r.data["orders"] = poly_orders(f, g, star, names);
        clock.lap("orders");
    }
    cache.save();
    return r;
}

std::vector<std::string> verify_suites() { return {"assoc", "derivation", "equivalence", "nilpotent-collapse", "pbw"}; }

RunReport cmd_verify(const VerifyRequest& req, const CommonOptions& common) {
    RunReport r;
    r.command = "verify";
    r.seed = req.seed;
    Stopwatch clock(r, common.timings);
    if (req.trials < 0) throw InputError("--trials must be non-negative");
    if (req.cap < 0) throw InputError("--cap must be non-negative");
    const LieAlgebra L = load_algebra_or_throw(req.algebra);
    const ScopedLambdaWeightCap weight_cap(std::max(lambda_weight_cap(), req.cap));
    CacheScope cache(shared_enveloping_algebra(L), common);
    r.inputs_digest = digest_hex("verify\n" + L.canonical_form() + "\n" + req.suite + "\n" + std::to_string(req.cap) +
                                 "\n" + std::to_string(req.trials) + "\n" + std::to_string(req.seed));
    add_algebra_info(r.data, L);
    r.data["suite"] = req.suite;
    r.data["cap"] = req.cap;
    r.data["trials"] = req.trials;
    const SuiteContext ctx{L, req, L.basis_names()};
    if (req.suite == "assoc") r.checks = suite_assoc(ctx);
    else if (req.suite == "derivation") r.checks = suite_derivation(ctx);
    else if (req.suite == "equivalence") r.checks = suite_equivalence(ctx);
    else if (req.suite == "nilpotent-collapse") r.checks = suite_nilpotent_collapse(ctx);
    else if (req.suite == "pbw") r.checks = suite_pbw(ctx);
    else throw InputError("unknown suite \"" + req.suite + "\"");
    clock.lap(req.suite);
    cache.save();
    return r;
}

RunReport cmd_weights(const WeightsRequest& req, const CommonOptions& common) {
    RunReport r;
    r.command = "weights";
    r.seed = req.seed;
    Stopwatch clock(r, common.timings);
    std::vector<AdmissibleGraph> graphs;
    if (!req.graph_file.empty()) {
        std::ifstream in(req.graph_file);
        if (!in) throw InputError("cannot read graph file " + req.graph_file);
        std::stringstream buf;
        buf << in.rdbuf();
        graphs.push_back(parse_graph_json(buf.str()));
    } else if (req.enumerate) {
        const auto [n, m] = *req.enumerate;
        graphs = m == 2 ? enumerate_admissible(n, m) : enumerate_by_edge_count(n, m, 2 * n + m - 2);
    } else {
        throw InputError("weights needs a graph file or --enumerate n m");
    }
    std::string key = "weights\n" + to_string(req.propagator) + "\n" + std::to_string(req.samples) + "\n" +
                      std::to_string(req.seed) + "\n";
    for (const auto& g : graphs) key += graph_to_json(g) + "\n";
    r.inputs_digest = digest_hex(key);
    WeightOptions opts;
    opts.samples = req.samples;
    opts.seed = req.seed;
    opts.gauge = req.gauge;
    r.data["propagator"] = to_string(req.propagator);
    r.data["samples"] = req.samples;
    json rows = json::array();
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto& g = graphs[i];
        const WeightEstimate w = weight_mc(g, req.propagator, opts);
        rows.push_back({{"graph", to_string(g)},
                        {"value", format_complex(w.value)},
                        {"std_error", w.std_error},
                        {"samples", w.samples},
                        {"rejected", w.rejected},
                        {"converged", w.converged}});
        if (req.expect) {
            const double diff = std::abs(w.value - std::complex<double>(*req.expect, 0.0));
            const double gate = std::max(req.tolerance, req.sigmas * w.std_error);
            CheckResult c{"expect " + to_string(g), diff <= gate, "", nullptr};
            char buf[128];
            std::snprintf(buf, sizeof buf, "|value - %.12g| = %.3g, gate %.3g", *req.expect, diff, gate);
            c.detail = buf;
            if (!c.passed)
                c.witness = {{"graph", graph_to_json(g)}, {"value", format_complex(w.value)}, {"expected", *req.expect},
                             {"std_error", w.std_error}};
            r.checks.push_back(c);
        }
    }
    r.data["weights"] = rows;
    clock.lap("integration");
    return r;
}

} // namespace logstar::cli
