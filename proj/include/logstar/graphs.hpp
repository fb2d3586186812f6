#pragma once

#include "logstar/lie_algebra.hpp"
#include "logstar/poly.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logstar {

/// Directed graph of type (n, m): vertices 0..n-1 are of the first type (in
/// the upper half-plane), n..n+m-1 of the second type (on the real line).
/// Edges leave first-type vertices only. The wedge order of the weight form
/// is the order of `edges`, which is kept sorted by source vertex; for the
/// star-product graphs edge 2v is the d_i slot of vertex v and 2v+1 the d_j slot.
struct AdmissibleGraph {
    int n = 0;
    int m = 0;
    std::vector<std::pair<int, int>> edges; // 0-based (source, target)

    int vertex_count() const { return n + m; }
    int out_degree(int v) const;
    int in_degree(int v) const;
    /// Every first-type vertex has out-degree exactly 2.
    bool is_star_graph() const;

    friend bool operator==(const AdmissibleGraph&, const AdmissibleGraph&) = default;
};

/// Throws InputError unless: sources are first-type vertices, no short loops,
/// no repeated ordered pair, indices in range, edges grouped by source.
void validate_graph(const AdmissibleGraph& g);

/// {"n":..,"m":..,"edges":[[src,tgt],...]}, 1-based vertices.
AdmissibleGraph parse_graph_json(std::string_view text);
std::string graph_to_json(const AdmissibleGraph& g);
/// "(2,2) 1->3 1->4 2->1 2->4", 1-based.
std::string to_string(const AdmissibleGraph& g);

inline constexpr int kMaxGraphVertices = 3;

/// All star-product graphs of type (n, m): each first-type vertex picks an
/// ordered pair of distinct targets other than itself. n <= 3, m <= 2.
std::vector<AdmissibleGraph> enumerate_admissible(int n, int m);

/// All graphs of type (n, m) with exactly `edge_count` distinct edges and no
/// out-degree constraint; edges in lexicographic order.
std::vector<AdmissibleGraph> enumerate_by_edge_count(int n, int m, int edge_count);

/// B_Gamma(pi, ..., pi)(f_1, .., f_m) for the linear bivector: vertex v with
/// outgoing edges (i-slot, j-slot) carries f_ij^k x_k, every edge carries one
/// index and differentiates its target. Star graphs only.
Poly graph_operator(const AdmissibleGraph& g, const LieAlgebra& algebra, std::span<const Poly> args);

enum class Propagator { Standard, Logarithmic, FourColoredLog };

std::string to_string(Propagator p);
/// "standard", "logarithmic" / "log", "four-colored" / "4log".
Propagator parse_propagator(std::string_view text);

/// Components of the 1-form along d(re z1), d(im z1), d(re z2), d(im z2);
/// z1 is the source. Standard is (1/2pi) d arg((z1-z2)/(conj(z1)-z2)), real
/// valued; Logarithmic is (1/2pi i) d log of the same ratio; FourColoredLog is
/// the quadrant form (1/2pi i) d log of that ratio times
/// (conj(z1)+conj(z2))/(z1+conj(z2)).
/// Throws DomainError on coincident or singular configurations and outside
/// the closed half-plane (quadrant).
std::array<std::complex<double>, 4> propagator_value(Propagator p, std::complex<double> z1, std::complex<double> z2);

/// arg((z1-z2)/(conj(z1)-z2)) in [0, 2pi); a real z1 gives 0.
double angle_function(std::complex<double> z1, std::complex<double> z2);

/// How the affine group z -> a z + b (a > 0, b real) is fixed.
///  FixRealPair:  second-type points at 0 and 1; all first-type points free.
///  RealAnchor:   first second-type point at 0, Im z_anchor = 1; Re z_anchor
///                and the remaining real points free (the second at R > 0).
///  PointAnchor:  z_anchor = i (no second-type points).
/// All gauges are oriented consistently with the default one of the type
/// (FixRealPair, RealAnchor on vertex 0, PointAnchor on vertex 0), whose
/// orientation is the product orientation of its coordinates (x_1, y_1, ...).
struct Gauge {
    enum class Kind { Default, FixRealPair, RealAnchor, PointAnchor };
    Kind kind = Kind::Default;
    int anchor = 0;
};

struct WeightOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    Gauge gauge;
    /// Samples closer than this to a singular locus count as zero.
    double guard = 1e-6;
    /// 0 = hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
    /// `converged` is false above this standard error.
    double convergence_tolerance = 0.05;
};

struct WeightEstimate {
    std::complex<double> value;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t rejected = 0;
    bool converged = false;
};

/// Monte Carlo estimate of the integral of the product of edge propagators
/// over the configuration space C_{n,m} (dimension 2n + m - 2). Requires
/// |E| = 2n + m - 2 and n <= 3.
WeightEstimate weight_mc(const AdmissibleGraph& g, Propagator p, const WeightOptions& options = {});

/// Estimates of several real linear combinations of the weights of `graphs`
/// (all of one type), from one shared sample stream: result r is
/// sum_j combination[r][j] * weight(graphs[j]), with its own standard error.
std::vector<WeightEstimate> combined_weights_mc(std::span<const AdmissibleGraph> graphs,
                                                const std::vector<std::vector<double>>& combinations,
                                                Propagator p, const WeightOptions& options = {});

/// Polynomial with complex floating coefficients and per-coefficient errors.
struct NumericTerm {
    std::complex<double> value;
    double std_error = 0.0;
};

struct NumericPoly {
    int dim = 0;
    std::map<Exponents, NumericTerm, GradedOrder> terms;
};

std::string to_string(const NumericPoly& p, std::span<const std::string> names);

/// Order-k term of the graph star product,
/// (1/k!) 2^-k sum_{Gamma in G_{k,2}} w_Gamma B_Gamma(f, g); the 2^-k
/// makes each vertex carry half the bracket, a normalization pinned by the
/// symbolic cross-check. k <= 2.
NumericPoly star_order_from_graphs(const LieAlgebra& algebra, int k, const Poly& f, const Poly& g, Propagator p,
                                   const WeightOptions& options = {});

} // namespace logstar
