#include "logstar/graphs.hpp"

#include "logstar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <thread>

namespace logstar {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Graphs

int AdmissibleGraph::out_degree(int v) const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == v; }));
}

int AdmissibleGraph::in_degree(int v) const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [&](const auto& e) { return e.second == v; }));
}

bool AdmissibleGraph::is_star_graph() const {
    if (static_cast<int>(edges.size()) != 2 * n) return false;
    for (int v = 0; v < n; ++v)
        if (edges[static_cast<std::size_t>(2 * v)].first != v || edges[static_cast<std::size_t>(2 * v + 1)].first != v)
            return false;
    return true;
}

void validate_graph(const AdmissibleGraph& g) {
    if (g.n < 0 || g.m < 0) throw InputError("graph type must be non-negative");
    std::set<std::pair<int, int>> seen;
    int last_source = -1;
    for (const auto& [s, t] : g.edges) {
        if (s < 0 || s >= g.vertex_count() || t < 0 || t >= g.vertex_count())
            throw InputError("edge endpoint out of range");
        if (s >= g.n) throw InputError("edge leaves a vertex of the second type");
        if (s == t) throw InputError("short loop at vertex " + std::to_string(s + 1));
        if (!seen.insert({s, t}).second)
            throw InputError("repeated edge " + std::to_string(s + 1) + "->" + std::to_string(t + 1));
        if (s < last_source) throw InputError("edges must be grouped by source vertex");
        last_source = s;
    }
}

AdmissibleGraph parse_graph_json(std::string_view text) {
    using json = nlohmann::json;
    AdmissibleGraph g;
    try {
        const json doc = json::parse(text);
        g.n = doc.at("n").get<int>();
        g.m = doc.at("m").get<int>();
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw InputError("an edge is a pair [source, target]");
            g.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed graph JSON: ") + e.what());
    }
    validate_graph(g);
    return g;
}

std::string graph_to_json(const AdmissibleGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [s, t] : g.edges) edges.push_back({s + 1, t + 1});
    return nlohmann::json{{"n", g.n}, {"m", g.m}, {"edges", edges}}.dump();
}

std::string to_string(const AdmissibleGraph& g) {
    std::string out = "(" + std::to_string(g.n) + "," + std::to_string(g.m) + ")";
    for (const auto& [s, t] : g.edges) out += " " + std::to_string(s + 1) + "->" + std::to_string(t + 1);
    return out;
}

namespace {

void check_enumeration_type(int n, int m) {
    if (n < 0 || n > kMaxGraphVertices)
        throw DomainError("graph enumeration is capped at n <= " + std::to_string(kMaxGraphVertices));
    if (m < 0 || m > 2) throw DomainError("graph enumeration supports m in {0, 1, 2}");
}

} // namespace

std::vector<AdmissibleGraph> enumerate_admissible(int n, int m) {
    check_enumeration_type(n, m);
    const int total = n + m;
    std::vector<AdmissibleGraph> out;
    AdmissibleGraph g{n, m, {}};
    // Depth-first over vertices, each choosing an ordered pair of targets.
    auto recurse = [&](auto&& self, int v) -> void {
        if (v == n) {
            out.push_back(g);
            return;
        }
        for (int a = 0; a < total; ++a) {
            if (a == v) continue;
            for (int b = 0; b < total; ++b) {
                if (b == v || b == a) continue;
                g.edges.emplace_back(v, a);
                g.edges.emplace_back(v, b);
                self(self, v + 1);
                g.edges.resize(g.edges.size() - 2);
            }
        }
    };
    recurse(recurse, 0);
    return out;
}

std::vector<AdmissibleGraph> enumerate_by_edge_count(int n, int m, int edge_count) {
    check_enumeration_type(n, m);
    std::vector<std::pair<int, int>> candidates;
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n + m; ++t)
            if (t != s) candidates.emplace_back(s, t);
    std::vector<AdmissibleGraph> out;
    if (edge_count < 0 || edge_count > static_cast<int>(candidates.size())) return out;
    AdmissibleGraph g{n, m, {}};
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(g.edges.size()) == edge_count) {
            out.push_back(g);
            return;
        }
        for (std::size_t i = start; i < candidates.size(); ++i) {
            g.edges.push_back(candidates[i]);
            self(self, i + 1);
            g.edges.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

Poly graph_operator(const AdmissibleGraph& g, const LieAlgebra& algebra, std::span<const Poly> args) {
    validate_graph(g);
    if (!g.is_star_graph()) throw DomainError("graph_operator needs out-degree 2 at every first-type vertex");
    if (static_cast<int>(args.size()) != g.m) throw DimensionMismatch("graph_operator: wrong number of arguments");
    const int d = algebra.dim();
    for (const auto& a : args)
        if (a.dim() != d) throw DimensionMismatch("graph_operator: argument not in S(g)");

    const std::size_t edge_count = g.edges.size();
    std::vector<int> index(edge_count, 0);
    Poly total(d);
    // Incoming edges per vertex, fixed for the graph.
    std::vector<std::vector<std::size_t>> incoming(static_cast<std::size_t>(g.vertex_count()));
    for (std::size_t e = 0; e < edge_count; ++e) incoming[static_cast<std::size_t>(g.edges[e].second)].push_back(e);

    auto evaluate = [&] {
        Poly product = Poly::constant(d, Coefficient(1));
        for (int v = 0; v < g.vertex_count(); ++v) {
            Poly factor(d);
            if (v < g.n) {
                for (const auto& [k, c] : algebra.bracket(index[static_cast<std::size_t>(2 * v)],
                                                        index[static_cast<std::size_t>(2 * v + 1)]))
                    factor.add_term(Exponents::unit(d, k), Coefficient(c));
            } else {
                factor = args[static_cast<std::size_t>(v - g.n)];
            }
            for (std::size_t e : incoming[static_cast<std::size_t>(v)]) {
                if (factor.is_zero()) break;
                factor = factor.derivative(index[e]);
            }
            if (factor.is_zero()) return;
            product = product * factor;
        }
        total += product;
    };
    auto recurse = [&](auto&& self, std::size_t e) -> void {
        if (e == edge_count) {
            evaluate();
            return;
        }
        for (int i = 0; i < d; ++i) {
            index[e] = i;
            // Prune once a vertex's bracket is known to vanish.
            if (e % 2 == 1 && g.edges[e].first == g.edges[e - 1].first &&
                algebra.bracket(index[e - 1], i).empty())
                continue;
            self(self, e + 1);
        }
    };
    recurse(recurse, 0);
    return total;
}

// ---------------------------------------------------------------------------
// Propagators

std::string to_string(Propagator p) {
    switch (p) {
    case Propagator::Standard: return "standard";
    case Propagator::Logarithmic: return "logarithmic";
    case Propagator::FourColoredLog: return "four-colored";
    }
    return "?";
}

Propagator parse_propagator(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "standard") return Propagator::Standard;
    if (t == "logarithmic" || t == "log") return Propagator::Logarithmic;
    if (t == "four-colored" || t == "fourcolored" || t == "4log") return Propagator::FourColoredLog;
    throw InputError("unknown propagator \"" + t + "\"");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

// Unchecked component formulas; callers guarantee a regular configuration.
std::array<cplx, 4> raw_components(Propagator p, cplx z1, cplx z2) {
    if (p == Propagator::FourColoredLog) {
        const cplx w1 = std::conj(z1), w2 = std::conj(z2);
        // d log of (z1-z2)/(w1-z2) * (w1+w2)/(z1+w2), split into dz / dzbar parts
        const cplx a1 = 1.0 / (z1 - z2) - 1.0 / (z1 + w2);
        const cplx b1 = -1.0 / (w1 - z2) + 1.0 / (w1 + w2);
        const cplx a2 = -1.0 / (z1 - z2) + 1.0 / (w1 - z2);
        const cplx b2 = 1.0 / (w1 + w2) - 1.0 / (z1 + w2);
        const cplx s = 1.0 / (kTwoPi * kI);
        return {s * (a1 + b1), s * kI * (a1 - b1), s * (a2 + b2), s * kI * (a2 - b2)};
    }
    const cplx a = 1.0 / (z1 - z2);
    const cplx b = -1.0 / (std::conj(z1) - z2);
    const cplx c = -a - b;
    const std::array<cplx, 4> dlog{a + b, kI * (a - b), c, kI * c};
    std::array<cplx, 4> out;
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = p == Propagator::Standard ? cplx(dlog[i].imag() / kTwoPi, 0.0) : dlog[i] / (kTwoPi * kI);
    return out;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

std::array<cplx, 4> propagator_value(Propagator p, cplx z1, cplx z2) {
    if (!finite(z1) || !finite(z2)) throw DomainError("propagator at a non-finite point");
    if (z1.imag() < 0 || z2.imag() < 0) throw DomainError("propagator argument below the real line");
    if (z1 == z2) throw DomainError("propagator at coincident points");
    if (p == Propagator::FourColoredLog) {
        if (z1.real() < 0 || z2.real() < 0) throw DomainError("four-colored propagator lives on the first quadrant");
        if (z1 + std::conj(z2) == 0.0 || std::conj(z1) + std::conj(z2) == 0.0)
            throw DomainError("four-colored propagator is singular at this configuration");
    }
    return raw_components(p, z1, z2);
}

double angle_function(cplx z1, cplx z2) {
    if (z1 == z2 || std::conj(z1) == z2) throw DomainError("angle function at a singular configuration");
    double a = std::arg((z1 - z2) / (std::conj(z1) - z2));
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

// Coordinates of a gauge: each vertex sits at base + q[xcol] + i q[ycol].
struct Layout {
    Gauge::Kind kind = Gauge::Kind::FixRealPair;
    int anchor = 0;
    int n = 0;
    int m = 0;
    int dim = 0;
    std::vector<cplx> base;
    std::vector<int> xcol, ycol;
};

Layout make_layout(int n, int m, Gauge gauge) {
    Layout l;
    l.n = n;
    l.m = m;
    l.kind = gauge.kind;
    if (l.kind == Gauge::Kind::Default) {
        l.kind = m == 2 ? Gauge::Kind::FixRealPair : m == 1 ? Gauge::Kind::RealAnchor : Gauge::Kind::PointAnchor;
        gauge.anchor = 0;
    }
    l.anchor = gauge.anchor;
    const std::size_t total = static_cast<std::size_t>(n + m);
    l.base.assign(total, cplx{});
    l.xcol.assign(total, -1);
    l.ycol.assign(total, -1);
    int col = 0;
    switch (l.kind) {
    case Gauge::Kind::FixRealPair:
        if (m != 2) throw DomainError("the FixRealPair gauge needs two second-type vertices");
        for (int v = 0; v < n; ++v) {
            l.xcol[static_cast<std::size_t>(v)] = col++;
            l.ycol[static_cast<std::size_t>(v)] = col++;
        }
        l.base[static_cast<std::size_t>(n + 1)] = 1.0;
        break;
    case Gauge::Kind::RealAnchor:
        if (m < 1 || m > 2) throw DomainError("the RealAnchor gauge needs one or two second-type vertices");
        if (l.anchor < 0 || l.anchor >= n) throw DomainError("gauge anchor must be a first-type vertex");
        l.base[static_cast<std::size_t>(l.anchor)] = kI;
        l.xcol[static_cast<std::size_t>(l.anchor)] = col++;
        if (m == 2) l.xcol[static_cast<std::size_t>(n + 1)] = col++;
        for (int v = 0; v < n; ++v) {
            if (v == l.anchor) continue;
            l.xcol[static_cast<std::size_t>(v)] = col++;
            l.ycol[static_cast<std::size_t>(v)] = col++;
        }
        break;
    case Gauge::Kind::PointAnchor:
        if (m != 0) throw DomainError("the PointAnchor gauge is for graphs without second-type vertices");
        if (l.anchor < 0 || l.anchor >= n) throw DomainError("gauge anchor must be a first-type vertex");
        l.base[static_cast<std::size_t>(l.anchor)] = kI;
        for (int v = 0; v < n; ++v) {
            if (v == l.anchor) continue;
            l.xcol[static_cast<std::size_t>(v)] = col++;
            l.ycol[static_cast<std::size_t>(v)] = col++;
        }
        break;
    case Gauge::Kind::Default: break;
    }
    l.dim = col;
    return l;
}

std::vector<cplx> embed(const Layout& l, std::span<const double> q) {
    std::vector<cplx> z = l.base;
    for (std::size_t v = 0; v < z.size(); ++v) {
        if (l.xcol[v] >= 0) z[v] += q[static_cast<std::size_t>(l.xcol[v])];
        if (l.ycol[v] >= 0) z[v] += kI * q[static_cast<std::size_t>(l.ycol[v])];
    }
    return z;
}

std::vector<double> normalize(const Layout& l, const std::vector<cplx>& z) {
    cplx shift;
    double scale = 1.0;
    switch (l.kind) {
    case Gauge::Kind::FixRealPair:
        shift = z[static_cast<std::size_t>(l.n)];
        scale = (z[static_cast<std::size_t>(l.n + 1)] - shift).real();
        break;
    case Gauge::Kind::RealAnchor:
        shift = z[static_cast<std::size_t>(l.n)];
        scale = z[static_cast<std::size_t>(l.anchor)].imag();
        break;
    default:
        shift = z[static_cast<std::size_t>(l.anchor)].real();
        scale = z[static_cast<std::size_t>(l.anchor)].imag();
        break;
    }
    std::vector<double> q(static_cast<std::size_t>(l.dim));
    for (std::size_t v = 0; v < z.size(); ++v) {
        const cplx w = (z[v] - shift) / scale;
        if (l.xcol[v] >= 0) q[static_cast<std::size_t>(l.xcol[v])] = w.real();
        if (l.ycol[v] >= 0) q[static_cast<std::size_t>(l.ycol[v])] = w.imag();
    }
    return q;
}

template <class T>
T determinant(std::vector<T> a, int n) {
    T det = 1.0;
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r * n + c)]) > std::abs(a[static_cast<std::size_t>(pivot * n + c)]))
                pivot = r;
        if (a[static_cast<std::size_t>(pivot * n + c)] == T(0.0)) return T(0.0);
        if (pivot != c) {
            for (int k = 0; k < n; ++k)
                std::swap(a[static_cast<std::size_t>(pivot * n + k)], a[static_cast<std::size_t>(c * n + k)]);
            det = -det;
        }
        const T p = a[static_cast<std::size_t>(c * n + c)];
        det *= p;
        for (int r = c + 1; r < n; ++r) {
            const T f = a[static_cast<std::size_t>(r * n + c)] / p;
            if (f == T(0.0)) continue;
            for (int k = c; k < n; ++k) a[static_cast<std::size_t>(r * n + k)] -= f * a[static_cast<std::size_t>(c * n + k)];
        }
    }
    return det;
}

// Sign of the Jacobian from gauge coordinates of `l` to the default gauge.
double orientation_sign(const Layout& l) {
    const Layout ref = make_layout(l.n, l.m, Gauge{});
    if (ref.kind == l.kind && ref.anchor == l.anchor) return 1.0;
    // A generic configuration with the real points at 0 < 1.
    std::vector<cplx> z(static_cast<std::size_t>(l.n + l.m));
    for (int v = 0; v < l.n; ++v) z[static_cast<std::size_t>(v)] = cplx(0.37 + 0.61 * v, 0.83 + 0.29 * v * v);
    for (int j = 0; j < l.m; ++j) z[static_cast<std::size_t>(l.n + j)] = static_cast<double>(j);
    std::vector<double> q = normalize(l, z);
    const int d = l.dim;
    std::vector<double> jac(static_cast<std::size_t>(d * d));
    const double h = 1e-6;
    for (int c = 0; c < d; ++c) {
        std::vector<double> qp = q, qm = q;
        qp[static_cast<std::size_t>(c)] += h;
        qm[static_cast<std::size_t>(c)] -= h;
        const auto fp = normalize(ref, embed(l, qp));
        const auto fm = normalize(ref, embed(l, qm));
        for (int r = 0; r < d; ++r)
            jac[static_cast<std::size_t>(r * d + c)] = (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) / (2 * h);
    }
    const double det = determinant(jac, d);
    if (!(std::abs(det) > 1e-9)) throw Error("degenerate gauge change");
    return det > 0 ? 1.0 : -1.0;
}

struct Centre {
    cplx z;
    bool real;
};

// Mixture of polar maps around the centres, radius r = u/(1-u).
class PointSampler {
public:
    static double component_density(const Centre& c, cplx z) {
        const double r = std::abs(z - c.z);
        const double angle = c.real ? std::numbers::pi : kTwoPi;
        return 1.0 / (angle * r * (1.0 + r) * (1.0 + r));
    }

    template <class Rng>
    static cplx draw(std::span<const Centre> centres, Rng& rng) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const auto k = static_cast<std::size_t>(u01(rng) * static_cast<double>(centres.size()));
        const Centre& c = centres[std::min(k, centres.size() - 1)];
        const double u = u01(rng);
        const double r = u / (1.0 - u);
        const double theta = (c.real ? std::numbers::pi : kTwoPi) * u01(rng);
        return c.z + std::polar(r, theta);
    }

    static double density(std::span<const Centre> centres, cplx z) {
        double s = 0.0;
        for (const auto& c : centres) s += component_density(c, z);
        return s / static_cast<double>(centres.size());
    }
};

struct Accumulator {
    std::vector<cplx> sum;
    std::vector<double> sum_sq;
    std::uint64_t count = 0;
    std::uint64_t rejected = 0;

    explicit Accumulator(std::size_t outputs = 0) : sum(outputs), sum_sq(outputs) {}
};

class Integrator {
public:
    Integrator(std::span<const AdmissibleGraph> graphs, const std::vector<std::vector<double>>& combos, Propagator p,
               const WeightOptions& options)
        : graphs_(graphs), combos_(combos), p_(p), options_(options) {
        const auto& g0 = graphs_.front();
        layout_ = make_layout(g0.n, g0.m, options_.gauge);
        sign_ = orientation_sign(layout_);
    }

    Accumulator run_batch(std::uint64_t batch, std::uint64_t count) const {
        std::seed_seq seq{static_cast<std::uint32_t>(options_.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(options_.seed >> 32),
                          static_cast<std::uint32_t>(batch & 0xffffffffu), static_cast<std::uint32_t>(batch >> 32)};
        std::mt19937_64 rng(seq);
        Accumulator acc(combos_.size());
        std::vector<cplx> z(layout_.base.size());
        std::vector<cplx> dets(graphs_.size());
        const int D = layout_.dim;
        std::vector<cplx> matrix(static_cast<std::size_t>(D * D));
        std::vector<std::array<cplx, 4>> pair_values(z.size() * z.size());
        for (std::uint64_t s = 0; s < count; ++s) {
            ++acc.count;
            double density = 1.0;
            if (!sample(rng, z, density)) {
                ++acc.rejected;
                continue;
            }
            // Every ordered pair used by some graph, evaluated once per sample.
            for (std::size_t src = 0; src < static_cast<std::size_t>(layout_.n); ++src)
                for (std::size_t tgt = 0; tgt < z.size(); ++tgt)
                    if (src != tgt) pair_values[src * z.size() + tgt] = raw_components(p_, z[src], z[tgt]);
            for (std::size_t j = 0; j < graphs_.size(); ++j) {
                std::fill(matrix.begin(), matrix.end(), cplx{});
                const auto& edges = graphs_[j].edges;
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    const auto [src, tgt] = edges[e];
                    const auto& val = pair_values[static_cast<std::size_t>(src) * z.size() + static_cast<std::size_t>(tgt)];
                    auto put = [&](int col, cplx v) {
                        if (col >= 0) matrix[e * static_cast<std::size_t>(D) + static_cast<std::size_t>(col)] += v;
                    };
                    put(layout_.xcol[static_cast<std::size_t>(src)], val[0]);
                    put(layout_.ycol[static_cast<std::size_t>(src)], val[1]);
                    put(layout_.xcol[static_cast<std::size_t>(tgt)], val[2]);
                    put(layout_.ycol[static_cast<std::size_t>(tgt)], val[3]);
                }
                dets[j] = determinant(matrix, D) * sign_;
            }
            for (std::size_t r = 0; r < combos_.size(); ++r) {
                cplx y;
                for (std::size_t j = 0; j < graphs_.size(); ++j)
                    if (combos_[r][j] != 0.0) y += combos_[r][j] * dets[j];
                y /= density;
                acc.sum[r] += y;
                acc.sum_sq[r] += std::norm(y);
            }
        }
        return acc;
    }

private:
    template <class Rng>
    bool sample(Rng& rng, std::vector<cplx>& z, double& density) const {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        z = layout_.base;
        std::vector<Centre> centres;
        const int m = layout_.m;
        density = 1.0;
        switch (layout_.kind) {
        case Gauge::Kind::FixRealPair:
            centres = {{0.0, true}, {1.0, true}};
            break;
        case Gauge::Kind::RealAnchor:
            if (m == 2) return sample_transported(rng, z, density);
            {
                // Re z_anchor ~ Cauchy.
                const double x = std::tan(std::numbers::pi * (u01(rng) - 0.5));
                density *= 1.0 / (std::numbers::pi * (1.0 + x * x));
                z[static_cast<std::size_t>(layout_.anchor)] = cplx(x, 1.0);
                centres = {{0.0, true}, {z[static_cast<std::size_t>(layout_.anchor)], false}};
            }
            break;
        case Gauge::Kind::PointAnchor:
            centres = {{kI, false}};
            break;
        case Gauge::Kind::Default: break;
        }
        const auto free = [&](int v) {
            return layout_.xcol[static_cast<std::size_t>(v)] >= 0 && layout_.ycol[static_cast<std::size_t>(v)] >= 0;
        };
        if (!draw_points(rng, centres, z, density, free)) return false;
        if (!separated(z)) return false;
        return density > 0 && std::isfinite(density);
    }

    // Product sampling in (Re z_a, R) has infinite variance where a point
    // approaches a real vertex, so the configuration is drawn in the
    // FixRealPair chart and rescaled by 1 / Im w_a; the chart change has
    // |Jacobian| = (Im w_a)^-(2n+1).
    template <class Rng>
    bool sample_transported(Rng& rng, std::vector<cplx>& z, double& density) const {
        std::vector<Centre> centres{{0.0, true}, {1.0, true}};
        std::vector<cplx> w(z.size());
        w[static_cast<std::size_t>(layout_.n + 1)] = 1.0;
        density = 1.0;
        if (!draw_points(rng, centres, w, density, [](int) { return true; })) return false;
        const double v = w[static_cast<std::size_t>(layout_.anchor)].imag();
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = w[i] / v;
        density *= std::pow(v, 2 * layout_.n + 1);
        return separated(z) && density > 0 && std::isfinite(density);
    }

    template <class Rng, class Free>
    bool draw_points(Rng& rng, std::vector<Centre>& centres, std::vector<cplx>& z, double& density, Free free) const {
        for (int v = 0; v < layout_.n; ++v) {
            if (!free(v)) continue;
            const cplx w = PointSampler::draw(centres, rng);
            if (!(w.imag() > options_.guard) || !finite(w)) return false;
            density *= PointSampler::density(centres, w);
            z[static_cast<std::size_t>(v)] = w;
            centres.push_back({w, false});
        }
        return true;
    }

    bool separated(const std::vector<cplx>& z) const {
        for (std::size_t a = 0; a < z.size(); ++a)
            for (std::size_t b = a + 1; b < z.size(); ++b)
                if (std::abs(z[a] - z[b]) < options_.guard) return false;
        return true;
    }

    std::span<const AdmissibleGraph> graphs_;
    const std::vector<std::vector<double>>& combos_;
    Propagator p_;
    WeightOptions options_;
    Layout layout_;
    double sign_ = 1.0;
};

constexpr std::uint64_t kBatchSize = 1 << 14;

} // namespace

std::vector<WeightEstimate> combined_weights_mc(std::span<const AdmissibleGraph> graphs,
                                                const std::vector<std::vector<double>>& combinations, Propagator p,
                                                const WeightOptions& options) {
    if (graphs.empty()) throw DomainError("no graphs to integrate");
    if (p == Propagator::FourColoredLog)
        throw DomainError("four-colored weights live on the quadrant configuration space and are not integrated");
    const int n = graphs.front().n, m = graphs.front().m;
    if (n > kMaxGraphVertices) throw DomainError("weights are computed for n <= 3 only");
    for (const auto& g : graphs) {
        validate_graph(g);
        if (g.n != n || g.m != m) throw DomainError("combined graphs must share their type");
        if (static_cast<int>(g.edges.size()) != 2 * n + m - 2)
            throw DomainError("graph " + to_string(g) + " is not of top degree: |E| must be 2n+m-2");
    }
    for (const auto& row : combinations)
        if (row.size() != graphs.size()) throw DimensionMismatch("combination row length differs from graph count");
    if (options.samples == 0) throw DomainError("at least one sample is required");

    const Integrator integrator(graphs, combinations, p, options);
    const std::uint64_t batches = (options.samples + kBatchSize - 1) / kBatchSize;
    std::vector<Accumulator> results(static_cast<std::size_t>(batches));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b; (b = next.fetch_add(1)) < batches;) {
            const std::uint64_t count = std::min(kBatchSize, options.samples - b * kBatchSize);
            results[static_cast<std::size_t>(b)] = integrator.run_batch(b, count);
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, batches));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Merge in batch order so the result does not depend on scheduling.
    Accumulator total(combinations.size());
    for (const auto& r : results) {
        for (std::size_t i = 0; i < combinations.size(); ++i) {
            total.sum[i] += r.sum[i];
            total.sum_sq[i] += r.sum_sq[i];
        }
        total.count += r.count;
        total.rejected += r.rejected;
    }
    std::vector<WeightEstimate> out;
    const double N = static_cast<double>(total.count);
    for (std::size_t i = 0; i < combinations.size(); ++i) {
        WeightEstimate w;
        w.value = total.sum[i] / N;
        const double var = std::max(0.0, total.sum_sq[i] / N - std::norm(w.value));
        w.std_error = N > 1 ? std::sqrt(var / (N - 1)) : 0.0;
        w.samples = total.count;
        w.seed = options.seed;
        w.rejected = total.rejected;
        w.converged = finite(w.value) && std::isfinite(w.std_error) && w.std_error <= options.convergence_tolerance;
        out.push_back(w);
    }
    return out;
}

WeightEstimate weight_mc(const AdmissibleGraph& g, Propagator p, const WeightOptions& options) {
    const std::vector<std::vector<double>> identity{{1.0}};
    return combined_weights_mc(std::span<const AdmissibleGraph>(&g, 1), identity, p, options).front();
}

std::string to_string(const NumericPoly& p, std::span<const std::string> names) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += "(" + format_complex(it->second.value) + ")";
        for (int i = 0; i < it->first.dim(); ++i) {
            const int e = it->first[i];
            if (e == 0) continue;
            out += "*" + names[static_cast<std::size_t>(i)];
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

NumericPoly star_order_from_graphs(const LieAlgebra& algebra, int k, const Poly& f, const Poly& g, Propagator p,
                                   const WeightOptions& options) {
    if (k < 0 || k > 2) throw DomainError("graph star products are assembled for orders k <= 2");
    const int d = algebra.dim();
    if (f.dim() != d || g.dim() != d) throw DimensionMismatch("star_order_from_graphs: arguments not in S(g)");
    for (const Poly* h : {&f, &g})
        for (const auto& [e, c] : h->terms())
            if (!c.is_rational()) throw DomainError("graph star products take rational polynomials");
    NumericPoly out;
    out.dim = d;
    if (k == 0) {
        const Poly fg = f * g;
        for (const auto& [e, c] : fg.terms()) out.terms[e] = {evaluate_numeric(c).as_complex(), 0.0};
        return out;
    }
    const auto graphs = enumerate_admissible(k, 2);
    const Poly args[] = {f, g};
    const double scale = 1.0 / (std::tgamma(k + 1.0) * std::pow(2.0, k));
    std::map<Exponents, std::vector<double>, GradedOrder> rows;
    for (std::size_t j = 0; j < graphs.size(); ++j) {
        const Poly op = graph_operator(graphs[j], algebra, args);
        for (const auto& [e, c] : op.terms()) {
            auto& row = rows.try_emplace(e, std::vector<double>(graphs.size(), 0.0)).first->second;
            row[j] = scale * c.rational_part().get_d();
        }
    }
    if (rows.empty()) return out;
    std::vector<std::vector<double>> combos;
    for (const auto& [e, row] : rows) combos.push_back(row);
    const auto estimates = combined_weights_mc(graphs, combos, p, options);
    std::size_t i = 0;
    for (const auto& [e, row] : rows) {
        out.terms[e] = {estimates[i].value, estimates[i].std_error};
        ++i;
    }
    return out;
}

} // namespace logstar
