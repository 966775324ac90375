#include "rmolp/efficiency.hpp"

#include "rmolp/error.hpp"
#include "rmolp/feasibility.hpp"
#include "rmolp/inner_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rmolp {

namespace {

constexpr double kAlignedNorm = 1e-9;
constexpr double kWitnessFloor = 1e-10;

// Column of the endpoint system attached to one active row.
struct Column {
  std::size_t row = 0;
  enum class Kind { Fixed, Cone } kind = Kind::Fixed;
  DataPoint scenario;             // Fixed
  std::optional<Vector> witness;  // Fixed norm-type rows
  std::size_t block = 0;          // Cone
  Index offset = 0;               // position inside the Fixed block
};

struct EndpointSolve {
  bool solved = false;
  bool exact = true;
  double residual = 0.0;
  EndpointCertificate cert;
};

const ConcaveRow* as_concave(const ReducedRow& row) { return std::get_if<ConcaveRow>(&row); }

std::size_t constraint_of(const ReducedRow& row) {
  return std::visit([](const auto& r) { return r.constraint; }, row);
}

std::size_t derivation_of(const ReducedRow& row) {
  if (const auto* lr = std::get_if<LinearRow>(&row)) return lr->derivation;
  return 0;
}

EndpointSolve solve_endpoint(const Matrix& c, const RobustFeasibleSet& set,
                             const ActiveGeometry& geo) {
  const Index m = c.rows();
  const Index n = c.cols();
  const Vector& x_bar = geo.point;

  ConeFeasibilitySystem sys;
  const std::size_t lambda = sys.add_block(BlockKind::Simplex, m);

  std::vector<Column> columns;
  Index fixed = 0;
  std::vector<EqualityGroup> alignments;
  for (std::size_t idx : geo.active_rows) {
    const ReducedRow& reduced = set.rows[idx];
    Column col;
    col.row = idx;
    if (const auto* lr = std::get_if<LinearRow>(&reduced)) {
      col.scenario = {lr->a, lr->b};
    } else {
      const ConcaveRow& row = std::get<ConcaveRow>(reduced);
      const Vector inner = row.inner(x_bar);
      const Index d = inner.size();
      const NormIndex norm = d == 1 ? NormIndex::One : row.norm;
      const double size = norm_value(inner, norm);
      if (is_effectively_linear(row)) {
        col.witness = Vector::Zero(d);
        col.scenario = {row.a, row.b};
      } else if (norm == NormIndex::Two && size > kAlignedNorm) {
        // The Euclidean subdifferential is a singleton away from zero.
        col.witness = inner / size;
        col.scenario = row.scenario(*col.witness);
      } else {
        col.kind = Column::Kind::Cone;
        col.block = sys.add_cone(d, dual_index(norm));
        if (size > kAlignedNorm) {
          // y'inner = mu ||inner||: w = y / mu is a subgradient at inner.
          Matrix coeffs(1, d + 1);
          coeffs.leftCols(d) = -inner.transpose();
          coeffs(0, d) = size;
          alignments.push_back({{{col.block, coeffs}}, Vector::Zero(1)});
        }
      }
    }
    if (col.kind == Column::Kind::Fixed) col.offset = fixed++;
    columns.push_back(std::move(col));
  }

  EqualityGroup stationarity;
  stationarity.rhs = Vector::Zero(n);
  stationarity.terms.push_back({lambda, c.transpose()});
  std::size_t nu_block = 0;
  if (fixed > 0) {
    const std::size_t nu = nu_block = sys.add_block(BlockKind::Nonneg, fixed);
    Matrix coeffs(n, fixed);
    for (const Column& col : columns) {
      if (col.kind == Column::Kind::Fixed) coeffs.col(col.offset) = -col.scenario.a;
    }
    stationarity.terms.push_back({nu, std::move(coeffs)});
  }
  for (const Column& col : columns) {
    if (col.kind != Column::Kind::Cone) continue;
    const ConcaveRow& row = std::get<ConcaveRow>(set.rows[col.row]);
    const Index d = row.m.rows();
    Matrix coeffs(n, d + 1);
    coeffs.leftCols(d) = row.m.transpose();
    coeffs.col(d) = -row.a;
    stationarity.terms.push_back({col.block, std::move(coeffs)});
  }
  sys.equalities.push_back(std::move(stationarity));
  for (EqualityGroup& g : alignments) sys.equalities.push_back(std::move(g));

  EndpointSolve out;
  out.exact = sys.polyhedral();
  const ConeSolveResult result = solve_cone_system(sys);
  const std::vector<Vector>* assignment = nullptr;
  if (const auto* ok = std::get_if<ConeFeasible>(&result)) {
    out.solved = true;
    out.residual = ok->residual;
    assignment = &ok->assignment;
  } else {
    const auto& bad = std::get<ConeResidual>(result);
    out.residual = bad.residual;
    assignment = &bad.assignment;
  }

  out.cert.exact = out.exact;
  out.cert.residual = out.residual;
  out.cert.lambda = (*assignment)[lambda].cwiseMax(0.0);
  for (const Column& col : columns) {
    const ReducedRow& reduced = set.rows[col.row];
    RowMultiplier rec;
    rec.constraint = constraint_of(reduced);
    rec.derivation = derivation_of(reduced);
    if (col.kind == Column::Kind::Fixed) {
      rec.mu = std::max(0.0, (*assignment)[nu_block](col.offset));
      rec.scenario = col.scenario;
      rec.witness = col.witness;
    } else {
      const ConcaveRow& row = *as_concave(reduced);
      const Vector& z = (*assignment)[col.block];
      const Index d = z.size() - 1;
      rec.mu = std::max(0.0, z(d));
      Vector w = rec.mu > kWitnessFloor ? Vector(z.head(d) / rec.mu) : Vector(Vector::Zero(d));
      rec.scenario = row.scenario(w);
      rec.witness = std::move(w);
    }
    rec.complementarity = rec.mu * (rec.scenario.a.dot(x_bar) - rec.scenario.b);
    out.cert.multipliers.push_back(std::move(rec));
  }
  return out;
}

bool needs_slater(const RobustFeasibleSet& set) {
  for (const ReducedRow& r : set.rows) {
    if (const auto* cr = as_concave(r); cr != nullptr && !is_effectively_linear(*cr)) return true;
  }
  return false;
}

std::optional<DominanceWitness> search_witness(const Matrix& c, double rho,
                                               const RobustFeasibleSet& set,
                                               const Vector& x_bar) {
  const ScenarioImprovement imp = best_improvement(c, set, x_bar);
  if (imp.t > kImprovementTolerance && replay_witness(c, set, x_bar, imp.x)) {
    return DominanceWitness{rho, imp.x, c * x_bar - c * imp.x};
  }
  return std::nullopt;
}

template <class Allowed>
void require_classes(const ValidatedProblem& problem, const char* name, Allowed allowed) {
  for (const UncertaintySet& set : problem->constraints) {
    if (!std::holds_alternative<Singleton>(set) && !allowed(set)) {
      throw std::invalid_argument(std::string(name) + " does not accept " +
                                  std::string(kind_name(set)) + " constraints");
    }
  }
}

EfficiencyVerdict certify_joint(const ValidatedProblem& problem, const Vector& x_bar) {
  const UncertainMOLP& p = problem.problem();
  if (!problem.sign_checked() && p.u.minCoeff() < 0.0) {
    throw Error(ErrorCode::NegativeU,
                "certification requires u in R^m_+; endpoint reduction fails otherwise");
  }
  if (x_bar.size() != p.n) {
    throw Error(ErrorCode::DimensionMismatch, "point must have n entries");
  }
  const RobustFeasibleSet set = reduce_constraints(problem);
  const ActiveGeometry geo = active_geometry(set, x_bar);
  if (needs_slater(set) && std::holds_alternative<SlaterViolated>(check_slater(set))) {
    throw Error(ErrorCode::SlaterViolated,
                "no strictly feasible point found for the norm-type constraints");
  }

  const EndpointObjectives ends = endpoint_objectives(problem);
  const EndpointSolve nominal = solve_endpoint(ends.nominal, set, geo);
  const EndpointSolve perturbed = solve_endpoint(ends.perturbed, set, geo);
  if (nominal.solved && perturbed.solved) {
    return Certified{{nominal.cert, perturbed.cert}};
  }

  const struct {
    const EndpointSolve* solve;
    const Matrix* c;
    double rho;
    const char* name;
  } ends_in_order[] = {{&nominal, &ends.nominal, 0.0, "nominal"},
                       {&perturbed, &ends.perturbed, 1.0, "perturbed"}};
  for (const auto& e : ends_in_order) {
    if (e.solve->solved) continue;
    std::optional<DominanceWitness> witness = search_witness(*e.c, e.rho, set, x_bar);
    if (e.solve->exact) {
      return Refuted{e.name, std::string("no multipliers exist for the ") + e.name + " endpoint",
                     std::move(witness)};
    }
    if (witness) {
      return Refuted{e.name, std::string("a feasible point dominates x_bar at the ") + e.name +
                                 " endpoint",
                     std::move(witness)};
    }
  }
  return Unknown{nominal.residual, perturbed.residual};
}

}  // namespace

ActiveGeometry active_geometry(const RobustFeasibleSet& set, const Vector& x_bar) {
  if (x_bar.size() != set.n) throw Error(ErrorCode::DimensionMismatch, "point must have n entries");
  ActiveGeometry geo;
  geo.point = x_bar;
  for (std::size_t i = 0; i < set.rows.size(); ++i) {
    const double slack = set.row_slack(i, x_bar);
    if (slack < -kActiveTolerance) {
      throw Error(ErrorCode::NotFeasiblePoint,
                  "point violates constraint " + std::to_string(constraint_of(set.rows[i])) +
                      " (slack " + std::to_string(slack) + ")",
                  constraint_of(set.rows[i]));
    }
    if (slack <= kActiveTolerance) {
      geo.active_rows.push_back(i);
      if (const auto* lr = std::get_if<LinearRow>(&set.rows[i])) {
        geo.generators.push_back(-lr->a);
      } else {
        geo.generators.push_back(-std::get<ConcaveRow>(set.rows[i]).supergradient(x_bar));
      }
    }
  }
  return geo;
}

EfficiencyVerdict certify_polytope(const ValidatedProblem& problem, const Vector& x_bar) {
  require_classes(problem, "certify_polytope",
                  [](const UncertaintySet& s) { return std::holds_alternative<Polytope>(s); });
  return certify_joint(problem, x_bar);
}

EfficiencyVerdict certify_box(const ValidatedProblem& problem, const Vector& x_bar) {
  require_classes(problem, "certify_box",
                  [](const UncertaintySet& s) { return std::holds_alternative<Box>(s); });
  return certify_joint(problem, x_bar);
}

EfficiencyVerdict certify_norm(const ValidatedProblem& problem, const Vector& x_bar) {
  require_classes(problem, "certify_norm",
                  [](const UncertaintySet& s) { return std::holds_alternative<NormBall>(s); });
  return certify_joint(problem, x_bar);
}

EfficiencyVerdict certify_ellipsoid(const ValidatedProblem& problem, const Vector& x_bar) {
  require_classes(problem, "certify_ellipsoid",
                  [](const UncertaintySet& s) { return std::holds_alternative<Ellipsoid>(s); });
  return certify_joint(problem, x_bar);
}

EfficiencyVerdict certify_weak_efficiency(const ValidatedProblem& problem, const Vector& x_bar) {
  bool polytope = true, box = true, norm = true, ellipsoid = true;
  for (const UncertaintySet& s : problem->constraints) {
    const bool single = std::holds_alternative<Singleton>(s);
    polytope &= single || std::holds_alternative<Polytope>(s);
    box &= single || std::holds_alternative<Box>(s);
    norm &= single || std::holds_alternative<NormBall>(s);
    ellipsoid &= single || std::holds_alternative<Ellipsoid>(s);
  }
  if (polytope) return certify_polytope(problem, x_bar);
  if (box) return certify_box(problem, x_bar);
  if (norm) return certify_norm(problem, x_bar);
  if (ellipsoid) return certify_ellipsoid(problem, x_bar);
  return certify_joint(problem, x_bar);
}

SlaterResult check_slater(const RobustFeasibleSet& set) {
  const Index n = set.n;
  auto concave_slack = [&](const Vector& x) {
    double v = kInf;
    for (std::size_t i = 0; i < set.rows.size(); ++i) {
      const auto* cr = as_concave(set.rows[i]);
      if (cr != nullptr && !is_effectively_linear(*cr)) v = std::min(v, cr->value(x));
    }
    return v;
  };

  double best = -kInf;
  Vector best_x = Vector::Zero(n);
  LpBuilder builder;
  builder.add_variables(n, -kInf);
  const Index t = builder.add_variables(1, -kInf);
  builder.set_cost(t, -1.0);
  builder.add_row({{t, -1.0}}, -1.0);
  append_inner_model(builder, set, {t, true});
  const LpSolution sol = solve_lp(builder.build());
  if (sol.status == LpStatus::Optimal) {
    const Vector x = sol.x.head(n);
    if (set.min_slack(x) >= -kActiveTolerance) {
      best = concave_slack(x);
      best_x = x;
    }
  }
  if (best < kSlaterMargin) {
    const MinSlackAscent ascent = maximize_min_slack(set, best_x);
    if (ascent.value > 0.0 && concave_slack(ascent.x) > best) {
      best = concave_slack(ascent.x);
      best_x = ascent.x;
    }
  }
  if (best >= kSlaterMargin) return SlaterPoint{best_x, best};
  return SlaterViolated{std::isfinite(best) ? best : -kInf};
}

ScenarioImprovement best_improvement(const Matrix& c, const RobustFeasibleSet& set,
                                     const Vector& x_bar) {
  const Index n = set.n;
  const Index m = c.rows();
  LpBuilder builder;
  builder.add_variables(n, -kInf);
  const Index t = builder.add_variables(1, -kInf);
  builder.set_cost(t, -1.0);
  builder.add_row({{t, -1.0}}, -1.0);
  const Vector target = c * x_bar;
  for (Index i = 0; i < m; ++i) {
    // (C x_bar)_i - (C x)_i - t >= 0
    LpBuilder::Terms terms;
    for (Index k = 0; k < n; ++k) {
      if (c(i, k) != 0.0) terms.emplace_back(k, -c(i, k));
    }
    terms.emplace_back(t, -1.0);
    builder.add_row(std::move(terms), -target(i));
  }
  ScenarioImprovement out;
  out.exact = append_inner_model(builder, set);
  const LpSolution sol = solve_lp(builder.build());
  if (sol.status == LpStatus::Optimal) {
    out.x = sol.x.head(n);
    out.t = sol.x(t);
  }
  return out;
}

bool weakly_efficient_for_scenario(const Matrix& c, const RobustFeasibleSet& set,
                                   const Vector& x_bar) {
  if (!set.all_linear()) {
    throw std::invalid_argument("weakly_efficient_for_scenario needs an all-linear set");
  }
  return best_improvement(c, set, x_bar).t <= kImprovementTolerance;
}

bool replay_witness(const Matrix& c, const RobustFeasibleSet& set, const Vector& x_bar,
                    const Vector& x) {
  if (x.size() != set.n || set.min_slack(x) < -kImprovementTolerance) return false;
  const Vector gap = c * x_bar - c * x;
  return gap.minCoeff() > kImprovementTolerance;
}

}  // namespace rmolp
