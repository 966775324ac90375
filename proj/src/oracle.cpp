#include "rmolp/oracle.hpp"

#include "rmolp/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmolp {

std::vector<Matrix> scenario_grid(const ValidatedProblem& problem, std::size_t k) {
  if (k < 2) throw std::invalid_argument("scenario grid needs k >= 2");
  std::vector<Matrix> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double rho = static_cast<double>(i) / static_cast<double>(k - 1);
    out.push_back(scenario_objective(problem.problem(), rho));
  }
  return out;
}

OracleVerdict refute_robust_weak_efficiency(const ValidatedProblem& problem,
                                            const Vector& x_bar, std::size_t k) {
  const RobustFeasibleSet set = reduce_constraints(problem);
  if (x_bar.size() != set.n) throw Error(ErrorCode::DimensionMismatch, "point must have n entries");
  if (set.min_slack(x_bar) < -kActiveTolerance) {
    throw Error(ErrorCode::NotFeasiblePoint, "point is not robust feasible");
  }
  OracleVerdict verdict;
  const std::vector<Matrix> grid = scenario_grid(problem, k);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ++verdict.checks.scenarios;
    ++verdict.checks.linear_programs;
    const ScenarioImprovement imp = best_improvement(grid[i], set, x_bar);
    if (imp.t > kImprovementTolerance && replay_witness(grid[i], set, x_bar, imp.x)) {
      const double rho = static_cast<double>(i) / static_cast<double>(k - 1);
      verdict.outcome = OracleOutcome::Refuted;
      verdict.witness = DominanceWitness{rho, imp.x, grid[i] * x_bar - grid[i] * imp.x};
      return verdict;
    }
  }
  verdict.outcome = set.all_linear() ? OracleOutcome::Confirmed : OracleOutcome::Inconclusive;
  return verdict;
}

namespace {

double simplex_violation(const Vector& lambda) {
  if (lambda.size() == 0) return kInf;
  return std::max(std::abs(lambda.sum() - 1.0), std::max(0.0, -lambda.minCoeff()));
}

double interval_violation(double x, double lo, double hi) {
  return std::max({0.0, lo - x, x - hi});
}

// Distance of (a, b) from V_j, measured per class; `w` is the recorded witness.
double membership_violation(const UncertaintySet& set, const RowMultiplier& rec) {
  const Vector& a = rec.scenario.a;
  const double b = rec.scenario.b;
  if (const auto* s = std::get_if<Singleton>(&set)) {
    return std::max((a - s->a_bar).lpNorm<Eigen::Infinity>(), std::abs(b - s->b_bar));
  }
  if (const auto* p = std::get_if<Polytope>(&set)) {
    const DataPoint& v = p->vertices[rec.derivation];
    return std::max((a - v.a).lpNorm<Eigen::Infinity>(), std::abs(b - v.b));
  }
  if (const auto* box = std::get_if<Box>(&set)) {
    double worst = interval_violation(b, box->b_lo, box->b_hi);
    for (Index i = 0; i < a.size(); ++i) {
      worst = std::max(worst, interval_violation(a(i), box->a_lo(i), box->a_hi(i)));
    }
    return worst;
  }
  if (const auto* nb = std::get_if<NormBall>(&set)) {
    const double off = norm_value(nb->z * (a - nb->a_bar), nb->s);
    return std::max(interval_violation(b, nb->b_lo, nb->b_hi), std::max(0.0, off - nb->delta));
  }
  if (const auto* e = std::get_if<Ellipsoid>(&set)) {
    // a = a0 + sum_l v_l span_l with v = -w.
    if (!rec.witness || rec.witness->size() != static_cast<Index>(e->spans.size())) return kInf;
    Vector expected = e->a0;
    for (std::size_t l = 0; l < e->spans.size(); ++l) {
      expected -= (*rec.witness)(static_cast<Index>(l)) * e->spans[l];
    }
    return std::max({interval_violation(b, e->b_lo, e->b_hi),
                     (a - expected).lpNorm<Eigen::Infinity>(),
                     std::max(0.0, rec.witness->norm() - 1.0)});
  }
  const auto& ball = std::get<Ball>(set);
  Vector diff(a.size() + 1);
  diff << a - ball.a_bar, b - ball.b_bar;
  return std::max(0.0, diff.norm() - ball.alpha);
}

bool structurally_sound(const UncertainMOLP& p, const RobustFeasibleSet& set,
                        const EndpointCertificate& cert) {
  if (cert.lambda.size() != p.m) return false;
  for (const RowMultiplier& rec : cert.multipliers) {
    if (rec.constraint >= p.constraints.size()) return false;
    if (rec.scenario.a.size() != p.n) return false;
    const UncertaintySet& cs = p.constraints[rec.constraint];
    std::size_t derivations = 1;
    if (const auto* poly = std::get_if<Polytope>(&cs)) derivations = poly->vertices.size();
    if (std::holds_alternative<Box>(cs)) derivations = std::size_t{1} << static_cast<unsigned>(p.n);
    if (rec.derivation >= derivations) return false;
    const bool norm_type = std::holds_alternative<NormBall>(cs) ||
                           std::holds_alternative<Ellipsoid>(cs) ||
                           std::holds_alternative<Ball>(cs);
    if (norm_type) {
      if (!rec.witness) return false;
      for (const ReducedRow& r : set.rows) {
        const auto* cr = std::get_if<ConcaveRow>(&r);
        if (cr != nullptr && cr->constraint == rec.constraint && rec.witness->size() != cr->m.rows()) {
          return false;
        }
      }
    }
  }
  return true;
}

double witness_violation(const RobustFeasibleSet& set, const EndpointCertificate& cert) {
  double worst = 0.0;
  for (const RowMultiplier& rec : cert.multipliers) {
    if (!rec.witness) continue;
    for (const ReducedRow& r : set.rows) {
      const auto* cr = std::get_if<ConcaveRow>(&r);
      if (cr != nullptr && cr->constraint == rec.constraint) {
        worst = std::max(worst, dual_norm_value(*rec.witness, cr->norm) - 1.0);
      }
    }
  }
  return worst;
}

double stationarity_residual(const Matrix& c, const EndpointCertificate& cert) {
  const Index n = c.cols();
  Vector r = c.transpose() * cert.lambda;
  Vector scale = c.cwiseAbs().colwise().maxCoeff().transpose();
  for (const RowMultiplier& rec : cert.multipliers) {
    r -= rec.mu * rec.scenario.a;
    scale = scale.cwiseMax(rec.scenario.a.cwiseAbs());
  }
  for (Index i = 0; i < n; ++i) r(i) /= std::max(1.0, scale(i));
  return r.norm();
}

double complementarity_violation(const Vector& x_bar, const EndpointCertificate& cert) {
  double worst = 0.0;
  for (const RowMultiplier& rec : cert.multipliers) {
    worst = std::max(worst, std::abs(rec.mu * (rec.scenario.a.dot(x_bar) - rec.scenario.b)));
  }
  return worst;
}

}  // namespace

VerificationReport verify_certificate(const ValidatedProblem& problem, const Vector& x_bar,
                                      const EfficiencyCertificate& cert, double tol) {
  const UncertainMOLP& p = problem.problem();
  VerificationReport report;
  auto record = [&](const std::string& name, double residual) {
    const bool passed = std::isfinite(residual) && residual <= tol;
    report.checks.push_back({name, residual, passed});
    if (!passed && report.valid) {
      report.valid = false;
      report.first_failure = name;
    }
  };

  const RobustFeasibleSet set = reduce_constraints(problem);
  const bool sound = x_bar.size() == p.n && structurally_sound(p, set, cert.nominal) &&
                     structurally_sound(p, set, cert.perturbed);
  record("structure", sound ? 0.0 : kInf);
  if (!sound) return report;

  const EndpointObjectives ends = endpoint_objectives(problem);
  const EndpointCertificate* both[] = {&cert.nominal, &cert.perturbed};

  record("point_feasibility", std::max(0.0, -set.min_slack(x_bar)));
  record("simplex_nominal", simplex_violation(cert.nominal.lambda));
  record("simplex_perturbed", simplex_violation(cert.perturbed.lambda));

  double signs = 0.0, witnesses = 0.0, membership = 0.0, complementarity = 0.0;
  for (const EndpointCertificate* e : both) {
    for (const RowMultiplier& rec : e->multipliers) {
      signs = std::max(signs, -rec.mu);
      membership = std::max(membership, membership_violation(p.constraints[rec.constraint], rec));
    }
    witnesses = std::max(witnesses, witness_violation(set, *e));
    complementarity = std::max(complementarity, complementarity_violation(x_bar, *e));
  }
  record("multiplier_signs", signs);
  record("witness_norms", witnesses);
  record("scenario_membership", membership);
  record("endpoint_equality_nominal", stationarity_residual(ends.nominal, cert.nominal));
  record("endpoint_equality_perturbed", stationarity_residual(ends.perturbed, cert.perturbed));
  record("complementarity", complementarity);
  return report;
}

}  // namespace rmolp
