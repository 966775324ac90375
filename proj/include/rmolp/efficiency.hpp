#pragma once

// Robust weak-efficiency certification under rank-1 objective uncertainty.
// Each endpoint objective C in {C_bar, C_bar + u v'} needs lambda in the
// simplex with C'lambda = sum_j mu_j a_j over constraints active at x_bar,
// where (a_j, b_j) is a worst-case scenario of constraint j.

#include "rmolp/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rmolp {

inline constexpr double kActiveTolerance = 1e-8;
inline constexpr double kCertificateTolerance = 1e-7;
inline constexpr double kSlaterMargin = 1e-6;
inline constexpr double kImprovementTolerance = 1e-9;

struct ActiveGeometry {
  Vector point;
  std::vector<std::size_t> active_rows;  // indices into RobustFeasibleSet::rows
  std::vector<Vector> generators;        // -a (or minus a supergradient) per active row
};

/// Throws Error(NotFeasiblePoint) when some row is violated beyond 1e-8.
ActiveGeometry active_geometry(const RobustFeasibleSet& set, const Vector& x_bar);

/// Multiplier attached to one reduced row.
struct RowMultiplier {
  std::size_t constraint = 0;
  std::size_t derivation = 0;  // vertex index for polytope/box rows, else 0
  double mu = 0.0;
  DataPoint scenario;            // (a_j, b_j) in V_j
  std::optional<Vector> witness; // w_j for norm-type rows
  double complementarity = 0.0;  // mu (a_j'x_bar - b_j)
};

struct EndpointCertificate {
  Vector lambda;
  std::vector<RowMultiplier> multipliers;
  double residual = 0.0;
  bool exact = true;  // solved by LP rather than projected gradient
};

struct EfficiencyCertificate {
  EndpointCertificate nominal;
  EndpointCertificate perturbed;
};

/// x with C x < C x_bar componentwise; gap = C x_bar - C x.
struct DominanceWitness {
  double rho = 0.0;
  Vector x;
  Vector gap;
};

struct Certified {
  EfficiencyCertificate certificate;
};
struct Refuted {
  std::string endpoint;  // "nominal", "perturbed" or "scenario"
  std::string reason;
  std::optional<DominanceWitness> witness;
};
struct Unknown {
  double nominal_residual = 0.0;
  double perturbed_residual = 0.0;
};
using EfficiencyVerdict = std::variant<Certified, Refuted, Unknown>;

/// Dispatches on the constraint classes present. Throws NotFeasiblePoint,
/// SlaterViolated, or NegativeU for problems validated without the sign gate.
EfficiencyVerdict certify_weak_efficiency(const ValidatedProblem& problem, const Vector& x_bar);

/// Class-restricted entry points; Singleton constraints are accepted by all.
/// Throw std::invalid_argument on other classes.
EfficiencyVerdict certify_polytope(const ValidatedProblem& problem, const Vector& x_bar);
EfficiencyVerdict certify_box(const ValidatedProblem& problem, const Vector& x_bar);
EfficiencyVerdict certify_norm(const ValidatedProblem& problem, const Vector& x_bar);
EfficiencyVerdict certify_ellipsoid(const ValidatedProblem& problem, const Vector& x_bar);

struct SlaterPoint {
  Vector x0;
  double min_slack = 0.0;  // over rows with a nonvanishing norm term
};
struct SlaterViolated {
  double max_slack = 0.0;
};
using SlaterResult = std::variant<SlaterPoint, SlaterViolated>;

/// Strict feasibility of the norm-type rows while linear rows stay feasible.
/// LP on the inner model first, then subgradient ascent on the min-slack.
SlaterResult check_slater(const RobustFeasibleSet& set);

struct ScenarioImprovement {
  double t = -kInf;  // best min_i (C x_bar - C x)_i, capped at 1
  Vector x;
  bool exact = true;  // the feasible set was modelled without approximation
};

/// max t s.t. (C x_bar - C x)_i >= t, x in the inner model of X, t <= 1.
ScenarioImprovement best_improvement(const Matrix& c, const RobustFeasibleSet& set,
                                     const Vector& x_bar);

/// No x in X with C x < C x_bar. Requires an all-linear set.
bool weakly_efficient_for_scenario(const Matrix& c, const RobustFeasibleSet& set,
                                   const Vector& x_bar);

/// Replays a candidate witness against the true set: feasible within 1e-9 and
/// strict dominance by more than 1e-9 in every objective.
bool replay_witness(const Matrix& c, const RobustFeasibleSet& set, const Vector& x_bar,
                    const Vector& x);

}  // namespace rmolp
