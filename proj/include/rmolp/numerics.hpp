#pragma once

// Dense numerical kernel: two-phase simplex, simplex projection, minimum-norm
// point of a polytope plus a ray, and cone-constrained linear feasibility.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace rmolp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Norms

/// Norm index s of an s-norm. Only 1, 2 and infinity are supported.
enum class NormIndex { One, Two, Inf };

/// Conjugate index: 1 <-> inf, 2 <-> 2.
NormIndex dual_index(NormIndex s);

double norm_value(const Vector& x, NormIndex s);

/// ||x||_{s*}, the norm dual to the s-norm.
double dual_norm_value(const Vector& x, NormIndex s);

/// An element w of the subdifferential of ||.||_s at x, so that
/// ||w||_{s*} <= 1 and w'x = ||x||_s. Returns 0 at x = 0.
Vector norm_subgradient(const Vector& x, NormIndex s);

/// Z^{-1} by Gaussian elimination with partial pivoting. Throws
/// Error(SingularZ) when the Hadamard-scaled determinant is <= 1e-12.
Matrix invert_symmetric(const Matrix& z);

/// |det Z| divided by the product of the row norms (in [0, 1]).
double scaled_determinant(const Matrix& z);

// ---------------------------------------------------------------------------
// Linear programming

enum class RowSense { GreaterEqual, Equal };

struct LpRow {
  Vector coeffs;
  double rhs = 0.0;
  RowSense sense = RowSense::GreaterEqual;
};

/// minimize objective'x  s.t.  rows, x >= lower (entries may be -inf).
struct LinearProgram {
  Vector objective;
  std::vector<LpRow> rows;
  Vector lower;

  /// All-free variables of the given dimension and zero objective.
  static LinearProgram free_variables(Index dimension);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double value = 0.0;
  // Populated on Optimal: one multiplier per row (>= 0 for GreaterEqual rows),
  // the dual objective, and the measured gap / dual infeasibility.
  Vector duals;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double dual_infeasibility = 0.0;
  std::size_t iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's rule. Rows are scaled to unit
/// max-abs coefficient. Throws Error(NumericalBreakdown) after 1e5 pivots.
LpSolution solve_lp(const LinearProgram& lp);

// ---------------------------------------------------------------------------
// Projections and minimum-norm points

/// Euclidean projection onto the unit simplex {x >= 0, sum x = 1}.
Vector project_simplex(const Vector& y);

struct MinNormResult {
  Vector point;      // p* = sum lambda_j points_j + mu * ray
  Vector weights;    // lambda, on the unit simplex
  double ray_weight = 0.0;  // mu >= 0
  bool certified = false;
  double gradient_mapping = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes ||.||^2 over conv(points) + R_+ ray by projected gradient with
/// step 1/L followed by an active-set polish on the support. `certified` is
/// set when the variational inequality holds on every generator to 1e-8.
MinNormResult min_norm_point(std::span<const Vector> points, const Vector& ray);

// ---------------------------------------------------------------------------
// Cone-constrained linear feasibility

enum class BlockKind {
  Free,     // R^d
  Nonneg,   // R^d_+
  Simplex,  // unit simplex in R^d
  Cone,     // (y, t) in R^{d-1} x R with ||y||_s <= t
};

struct VariableBlock {
  BlockKind kind = BlockKind::Free;
  Index size = 0;
  NormIndex norm = NormIndex::Two;  // Cone only
};

struct EqualityTerm {
  std::size_t block = 0;
  Matrix coeffs;  // rows x block size
};

/// sum_k coeffs_k * z_{block_k} = rhs
struct EqualityGroup {
  std::vector<EqualityTerm> terms;
  Vector rhs;
};

struct ConeFeasibilitySystem {
  std::vector<VariableBlock> blocks;
  std::vector<EqualityGroup> equalities;

  std::size_t add_block(BlockKind kind, Index size,
                        NormIndex norm = NormIndex::Two);
  /// Adds a cone block (y, t) with ||y||_s <= t; y has `dimension` entries.
  std::size_t add_cone(Index dimension, NormIndex norm);

  Index dimension() const;
  Index equality_rows() const;
  bool polyhedral() const;  // no Cone block with s = 2
};

struct ConeFeasible {
  std::vector<Vector> assignment;  // one vector per block
  double residual = 0.0;
};

struct ConeResidual {
  double residual = 0.0;
  std::vector<Vector> assignment;  // best found
};

using ConeSolveResult = std::variant<ConeFeasible, ConeResidual>;

enum class ConeMethod {
  Automatic,          // LP when polyhedral, projected gradient otherwise
  ProjectedGradient,  // always projected gradient
  LinearProgram,      // exact; requires polyhedral()
};

/// Residual threshold (after row scaling) for a Feasible verdict.
inline constexpr double kConeFeasibilityTolerance = 1e-7;

ConeSolveResult solve_cone_system(const ConeFeasibilitySystem& system,
                                  ConeMethod method = ConeMethod::Automatic);

/// Euclidean projection onto {(y, t) : ||y||_s <= t}; the last entry is t.
Vector project_norm_cone(const Vector& point, NormIndex s);

}  // namespace rmolp
