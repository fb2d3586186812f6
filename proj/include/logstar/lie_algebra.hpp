#pragma once

#include "logstar/poly.hpp"
#include "logstar/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logstar {

/// One term c * x_k of a bracket; indices are 0-based.
struct BracketTerm {
    int k = 0;
    Rational c;
};

/// [x_i, x_j] = sum of terms, 0-based, with i < j.
struct BracketEntry {
    int i = 0;
    int j = 0;
    std::vector<BracketTerm> terms;
};

/// Finite-dimensional Lie algebra over Q given by structure constants
/// [x_i, x_j] = sum_k f_ij^k x_k. Antisymmetry and the Jacobi identity are
/// verified exactly on construction; after that the object is immutable.
///
/// Violation witnesses carry 1-based indices, matching the file format.
class LieAlgebra {
public:
    /// Brackets for i < j only; the table is completed antisymmetrically.
    static LieAlgebra from_brackets(std::string name, std::vector<std::string> basis,
                                    const std::vector<BracketEntry>& brackets);

    /// Full table, indexed (i * d + j) * d + k. Checked for antisymmetry.
    static LieAlgebra from_structure_constants(std::string name, std::vector<std::string> basis,
                                               std::vector<Rational> table);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const std::vector<std::string>& basis_names() const { return basis_; }
    /// Basis names with the first letter upper-cased (enveloping algebra).
    const std::vector<std::string>& generator_names() const { return generators_; }

    const Rational& structure_constant(int i, int j, int k) const {
        return table_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
    }
    /// Non-zero terms (k, f_ij^k) of [x_i, x_j].
    const std::vector<std::pair<int, Rational>>& bracket(int i, int j) const {
        return sparse_[static_cast<std::size_t>(i * dim_ + j)];
    }
    bool is_abelian() const;

    /// Deterministic text of the full table; the input of digest().
    std::string canonical_form() const;
    /// FNV-1a 64-bit hash of canonical_form().
    std::uint64_t digest() const;

private:
    LieAlgebra() = default;
    void finish();

    std::string name_;
    int dim_ = 0;
    std::vector<std::string> basis_;
    std::vector<std::string> generators_;
    std::vector<Rational> table_;
    std::vector<std::vector<std::pair<int, Rational>>> sparse_;
};

/// Parses the JSON algebra format
///   {"dim": d, "basis": [names], "brackets": [{"i":1,"j":2,"terms":[{"k":3,"c":"1"}]}]}
/// with 1-based indices and i < j. Throws InputError for malformed input,
/// JacobiViolation for a non-Lie bracket.
LieAlgebra parse_lie_algebra_json(std::string_view text, std::string name = "custom");

/// Serializes to the same format.
std::string lie_algebra_to_json(const LieAlgebra& algebra);

/// Built-ins: abelian<d>, heisenberg3, aff1, sl2, gl2, t2.
LieAlgebra builtin_algebra(std::string_view name);
std::vector<std::string> builtin_algebra_names();

/// A built-in name, or else a path to a JSON file.
LieAlgebra load_lie_algebra(std::string_view name_or_path);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Matrix of ad(sum a_i x_i); column j holds [sum a_i x_i, x_j].
RationalMatrix adjoint_matrix(const LieAlgebra& algebra, std::span<const Rational> coeffs);

/// c_n(xi) = tr(ad(xi)^n) as a homogeneous polynomial of degree n in the
/// dual coordinates.
struct TracePolynomial {
    int n = 0;
    DualPoly poly;
};

TracePolynomial trace_polynomial(const LieAlgebra& algebra, int n);

/// c_1 .. c_nmax in one pass.
std::vector<TracePolynomial> trace_polynomials(const LieAlgebra& algebra, int nmax);

/// {f, g} = sum f_ij^k x_k d_i f d_j g, so that {x_i, x_j} = [x_i, x_j].
Poly poisson_bracket(const LieAlgebra& algebra, const Poly& f, const Poly& g);

} // namespace logstar
