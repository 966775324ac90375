#include "rmolp/feasibility.hpp"

#include "rmolp/error.hpp"

#include <cmath>
#include <stdexcept>

namespace rmolp {

namespace {

constexpr double kRadiusGap = 1e-6;
constexpr double kWitnessSlack = -1e-8;

Vector row_supergradient(const ReducedRow& row, const Vector& x) {
  if (const auto* lr = std::get_if<LinearRow>(&row)) return lr->a;
  return std::get<ConcaveRow>(row).supergradient(x);
}

RobustFeasibleSet ball_set(std::span<const DataPoint> nominal, double alpha) {
  RobustFeasibleSet set;
  set.n = nominal.front().a.size();
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    set.rows.emplace_back(ball_row(nominal[j].a, nominal[j].b, alpha, j));
  }
  return set;
}

}  // namespace

std::vector<DataPoint> as_data(std::span<const LinearRow> rows) {
  std::vector<DataPoint> out;
  out.reserve(rows.size());
  for (const LinearRow& r : rows) out.push_back({r.a, r.b});
  return out;
}

FeasibilityResult is_feasible(std::span<const DataPoint> rows) {
  if (rows.empty()) throw std::invalid_argument("is_feasible needs at least one row");
  const Index n = rows.front().a.size();
  LinearProgram lp = LinearProgram::free_variables(n);
  for (const DataPoint& r : rows) {
    if (r.a.size() != n) throw Error(ErrorCode::DimensionMismatch, "rows differ in dimension");
    lp.rows.push_back({r.a, r.b, RowSense::GreaterEqual});
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) return InfeasibleSystem{};
  return FeasiblePoint{sol.x};
}

ConeMembership cone_contains(std::span<const Vector> generators, const Vector& target) {
  if (generators.empty()) throw std::invalid_argument("cone_contains needs generators");
  const Index k = target.size();
  const Index g = static_cast<Index>(generators.size());
  LinearProgram lp;
  lp.objective = Vector::Zero(g);
  lp.lower = Vector::Zero(g);
  for (Index i = 0; i < k; ++i) {
    LpRow row{Vector(g), target(i), RowSense::Equal};
    for (Index j = 0; j < g; ++j) {
      const Vector& gen = generators[static_cast<std::size_t>(j)];
      if (gen.size() != k) throw Error(ErrorCode::DimensionMismatch, "generator dimension");
      row.coeffs(j) = gen(i);
    }
    lp.rows.push_back(std::move(row));
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) return {};
  return {true, sol.x.cwiseMax(0.0)};
}

HypographicalSet hypographical_set(std::span<const DataPoint> nominal) {
  if (nominal.empty()) {
    throw std::invalid_argument("hypographical set of an empty system");
  }
  const Index n = nominal.front().a.size();
  HypographicalSet h;
  for (const DataPoint& r : nominal) {
    if (r.a.size() != n) throw Error(ErrorCode::DimensionMismatch, "rows differ in dimension");
    Vector p(n + 1);
    p << r.a, r.b;
    h.points.push_back(std::move(p));
  }
  h.ray = Vector::Zero(n + 1);
  h.ray(n) = -1.0;
  return h;
}

RadiusResult radius_of_robust_feasibility(std::span<const DataPoint> nominal) {
  const HypographicalSet h = hypographical_set(nominal);
  if (std::holds_alternative<InfeasibleSystem>(is_feasible(nominal))) {
    throw Error(ErrorCode::NominalInfeasible, "nominal constraint system is infeasible");
  }
  const MinNormResult mn = min_norm_point(h.points, h.ray);
  if (!mn.certified) {
    throw Error(ErrorCode::NonCertified,
                "minimum-norm point did not pass its optimality check");
  }
  return {mn.point.norm(), mn.point, mn.weights, mn.ray_weight, true};
}

MinSlackAscent maximize_min_slack(const RobustFeasibleSet& set, const Vector& start,
                                  std::size_t iterations) {
  MinSlackAscent best{start, set.min_slack(start)};
  if (set.rows.empty()) return best;
  Vector x = start;
  for (std::size_t k = 1; k <= iterations; ++k) {
    std::size_t worst = 0;
    double value = kInf;
    for (std::size_t i = 0; i < set.rows.size(); ++i) {
      const double s = set.row_slack(i, x);
      if (s < value) {
        value = s;
        worst = i;
      }
    }
    if (value > best.value) best = {x, value};
    const Vector g = row_supergradient(set.rows[worst], x);
    const double gn = g.norm();
    if (gn == 0.0) break;
    x += g / (gn * std::sqrt(static_cast<double>(k)));
  }
  const double last = set.min_slack(x);
  if (last > best.value) best = {x, last};
  return best;
}

BallFeasibility ball_robust_feasible(std::span<const DataPoint> nominal, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::BadInterval, "alpha must be >= 0");
  if (nominal.empty()) throw std::invalid_argument("ball_robust_feasible needs rows");
  const FeasibilityResult base = is_feasible(nominal);
  const auto* x0 = std::get_if<FeasiblePoint>(&base);
  if (x0 == nullptr) {
    throw Error(ErrorCode::NominalInfeasible, "nominal constraint system is infeasible");
  }
  const RobustFeasibleSet set = ball_set(nominal, alpha);

  BallFeasibility out;
  if (alpha == 0.0) {
    out.verdict = BallVerdict::Feasible;
    out.x = x0->x;
    out.min_slack = set.min_slack(x0->x);
    out.radius = radius_of_robust_feasibility(nominal);
    return out;
  }
  out.radius = radius_of_robust_feasibility(nominal);
  const double rho = out.radius.rho;
  if (alpha > rho + kRadiusGap) {
    out.verdict = BallVerdict::Infeasible;
    return out;
  }
  if (std::abs(alpha - rho) <= kRadiusGap) {
    out.verdict = BallVerdict::Inconclusive;
    return out;
  }

  const Index n = set.n;
  std::vector<Vector> candidates;
  // p* = (y, s) supports H: (a_j, b_j)'p* >= rho^2 for every row, so
  // x = y / (-s) has slack >= rho ||(x, -1)|| whenever s < 0.
  const Vector y = out.radius.p_star.head(n);
  const double s = out.radius.p_star(n);
  if (s < -1e-12 * std::max(1.0, rho)) {
    candidates.push_back(y / -s);
  } else {
    // s = 0: move along y from a nominal point until the margin dominates.
    double t = 1.0;
    for (int i = 0; i < 64; ++i, t *= 2.0) {
      const Vector x = x0->x + t * y;
      if (set.min_slack(x) >= 0.0) {
        candidates.push_back(x);
        break;
      }
    }
  }
  candidates.push_back(maximize_min_slack(set, Vector::Zero(n)).x);

  double best = -kInf;
  for (const Vector& x : candidates) {
    const double v = set.min_slack(x);
    if (v > best) {
      best = v;
      out.x = x;
    }
  }
  if (best >= kWitnessSlack) {
    out.verdict = BallVerdict::Feasible;
    out.min_slack = best;
  } else {
    out.verdict = BallVerdict::Inconclusive;
    out.x.reset();
  }
  return out;
}

}  // namespace rmolp
