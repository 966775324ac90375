#pragma once

// Problem representation for multi-objective LPs with rank-1 objective
// uncertainty and per-constraint uncertainty sets, plus the reduction of each
// uncertainty class to its worst-case row(s).

#include "rmolp/numerics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace rmolp {

/// A realization (a, b) of constraint data, read as a'x >= b.
struct DataPoint {
  Vector a;
  double b = 0.0;
};

struct Singleton {
  Vector a_bar;
  double b_bar = 0.0;
};

/// conv(vertices); every vertex lives in R^{n+1}.
struct Polytope {
  std::vector<DataPoint> vertices;
};

/// [a_lo, a_hi] x [b_lo, b_hi]
struct Box {
  Vector a_lo;
  Vector a_hi;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

/// {a_bar + delta v : ||Z v||_s <= 1} x [b_lo, b_hi]
struct NormBall {
  Vector a_bar;
  Matrix z;
  double delta = 0.0;
  NormIndex s = NormIndex::Two;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

/// {a0 + sum_l v_l spans_l : ||v||_2 <= 1} x [b_lo, b_hi]
struct Ellipsoid {
  Vector a0;
  std::vector<Vector> spans;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

/// (a_bar, b_bar) + alpha * B_{n+1}, the joint Euclidean ball.
struct Ball {
  Vector a_bar;
  double b_bar = 0.0;
  double alpha = 0.0;
};

using UncertaintySet = std::variant<Singleton, Polytope, Box, NormBall, Ellipsoid, Ball>;

/// "singleton", "polytope", "box", "norm_ball", "ellipsoid" or "ball".
std::string_view kind_name(const UncertaintySet& set);

struct UncertainMOLP {
  Index m = 0;
  Index n = 0;
  Matrix c_bar;  // m x n
  Vector u;      // m, expected >= 0
  Vector v;      // n
  std::vector<UncertaintySet> constraints;
};

/// Whether validation enforces u >= 0. Skipping it is reserved for oracle
/// replays of instances that deliberately violate the sign requirement.
enum class SignGate { Enforce, Skip };

class ValidatedProblem {
 public:
  const UncertainMOLP& problem() const noexcept { return problem_; }
  const UncertainMOLP* operator->() const noexcept { return &problem_; }
  bool sign_checked() const noexcept { return gate_ == SignGate::Enforce; }

 private:
  friend ValidatedProblem validate_problem(UncertainMOLP problem, SignGate gate);
  ValidatedProblem(UncertainMOLP problem, SignGate gate)
      : problem_(std::move(problem)), gate_(gate) {}

  UncertainMOLP problem_;
  SignGate gate_;
};

/// Checks dimensions, u >= 0 (unless skipped), interval ordering, vertex
/// lists and invertibility of Z. Throws Error with the violated invariant.
ValidatedProblem validate_problem(UncertainMOLP problem,
                                  SignGate gate = SignGate::Enforce);

/// One worst-case linear row a'x >= b.
struct LinearRow {
  Vector a;
  double b = 0.0;
  std::size_t constraint = 0;
  std::size_t derivation = 0;  // vertex index within the constraint

  double slack(const Vector& x) const { return a.dot(x) - b; }
};

/// Concave worst-case row x -> a'x - b - ||M x + c||_norm. Its scenarios are
/// (a - M'w, b + c'w) for ||w||_{norm*} <= 1.
struct ConcaveRow {
  Vector a;
  double b = 0.0;
  Matrix m;
  Vector c;
  NormIndex norm = NormIndex::Two;
  std::size_t constraint = 0;

  Vector inner(const Vector& x) const { return m * x + c; }
  double value(const Vector& x) const;
  /// w in the subdifferential of ||.||_norm at M x + c.
  Vector witness(const Vector& x) const;
  Vector supergradient(const Vector& x) const;
  DataPoint scenario(const Vector& w) const;
};

using ReducedRow = std::variant<LinearRow, ConcaveRow>;

/// Finite representation of the robust feasible set X.
struct RobustFeasibleSet {
  Index n = 0;
  std::vector<ReducedRow> rows;

  bool all_linear() const;
  std::vector<LinearRow> linear_rows() const;
  double row_slack(std::size_t i, const Vector& x) const;
  /// min over rows of the (possibly concave) slack; +inf for no rows.
  double min_slack(const Vector& x) const;
};

inline constexpr Index kMaxBoxDimension = 16;

/// Worst-case reduction of every constraint. Deterministic ordering:
/// constraint index, then vertex index. Throws Error(BoxTooLarge) when a box
/// lives in dimension > 16.
RobustFeasibleSet reduce_constraints(const ValidatedProblem& problem);
RobustFeasibleSet reduce_constraints(std::span<const UncertaintySet> constraints,
                                     Index n);

/// Row for the joint ball (a_bar, b_bar) + alpha B_{n+1}:
/// a_bar'x - b_bar - alpha ||(x, -1)||.
ConcaveRow ball_row(const Vector& a_bar, double b_bar, double alpha,
                    std::size_t constraint = 0);

struct EndpointObjectives {
  Matrix nominal;    // C_bar
  Matrix perturbed;  // C_bar + u v'
};

EndpointObjectives endpoint_objectives(const ValidatedProblem& problem);

/// C_bar + rho u v'.
Matrix scenario_objective(const UncertainMOLP& problem, double rho);

}  // namespace rmolp
