#pragma once

// Robust feasibility: finite-system feasibility, cone membership, the
// hypographical set of a nominal system and its distance to the origin
// (the radius of robust feasibility), and ball-robust feasibility probes.

#include "rmolp/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace rmolp {

struct FeasiblePoint {
  Vector x;
};
struct InfeasibleSystem {};
using FeasibilityResult = std::variant<FeasiblePoint, InfeasibleSystem>;

/// Phase-I LP on {x : a_j'x >= b_j}. Throws on an empty row list.
FeasibilityResult is_feasible(std::span<const DataPoint> rows);

std::vector<DataPoint> as_data(std::span<const LinearRow> rows);

struct ConeMembership {
  bool contained = false;
  Vector weights;  // nonnegative, one per generator; empty when not contained
};

/// Decides target in cone(generators) by LP.
ConeMembership cone_contains(std::span<const Vector> generators, const Vector& target);

struct HypographicalSet {
  std::vector<Vector> points;  // (a_j, b_j) in R^{n+1}
  Vector ray;                  // (0, ..., 0, -1)
};

HypographicalSet hypographical_set(std::span<const DataPoint> nominal);

struct RadiusResult {
  double rho = 0.0;
  Vector p_star;
  Vector lambda;
  double mu = 0.0;
  bool certified = false;
};

/// Distance from the origin to the hypographical set. Throws
/// Error(NominalInfeasible) or Error(NonCertified).
RadiusResult radius_of_robust_feasibility(std::span<const DataPoint> nominal);

enum class BallVerdict { Feasible, Infeasible, Inconclusive };

struct BallFeasibility {
  BallVerdict verdict = BallVerdict::Inconclusive;
  std::optional<Vector> x;  // set when Feasible
  double min_slack = 0.0;   // worst-case slack at x (Feasible only)
  RadiusResult radius;
};

/// Feasibility of a'x >= b for every (a, b) within alpha of each nominal row.
BallFeasibility ball_robust_feasible(std::span<const DataPoint> nominal, double alpha);

struct MinSlackAscent {
  Vector x;
  double value = 0.0;
};

/// Subgradient ascent on x -> min_j slack_j(x) with steps 1/sqrt(k) along the
/// normalized supergradient. Returns the best iterate.
MinSlackAscent maximize_min_slack(const RobustFeasibleSet& set, const Vector& start,
                                  std::size_t iterations = 5000);

}  // namespace rmolp
