#include "rmolp/model.hpp"

#include "rmolp/error.hpp"

#include <cmath>
#include <string>

namespace rmolp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string where(std::size_t j) { return "constraint " + std::to_string(j) + ": "; }

void require_size(const Vector& x, Index n, std::size_t j, const char* field) {
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                where(j) + field + " has " + std::to_string(x.size()) +
                    " entries, expected " + std::to_string(n),
                j);
  }
}

void require_interval(double lo, double hi, std::size_t j, const char* field) {
  if (!(lo <= hi)) {
    throw Error(ErrorCode::BadInterval, where(j) + field + " interval is empty", j);
  }
}

void validate_constraint(const UncertaintySet& set, Index n, std::size_t j) {
  std::visit(
      overloaded{
          [&](const Singleton& s) { require_size(s.a_bar, n, j, "a_bar"); },
          [&](const Polytope& p) {
            if (p.vertices.empty()) {
              throw Error(ErrorCode::EmptyVertexList, where(j) + "polytope has no vertices", j);
            }
            for (const DataPoint& v : p.vertices) require_size(v.a, n, j, "vertex");
          },
          [&](const Box& b) {
            require_size(b.a_lo, n, j, "a_lo");
            require_size(b.a_hi, n, j, "a_hi");
            for (Index i = 0; i < n; ++i) require_interval(b.a_lo(i), b.a_hi(i), j, "a");
            require_interval(b.b_lo, b.b_hi, j, "b");
          },
          [&](const NormBall& nb) {
            require_size(nb.a_bar, n, j, "a_bar");
            if (nb.z.rows() != n || nb.z.cols() != n) {
              throw Error(ErrorCode::DimensionMismatch, where(j) + "Z must be n x n", j);
            }
            if (!(nb.delta >= 0.0)) {
              throw Error(ErrorCode::BadInterval, where(j) + "delta must be >= 0", j);
            }
            if (scaled_determinant(nb.z) <= 1e-12) {
              throw Error(ErrorCode::SingularZ, where(j) + "Z is numerically singular", j);
            }
            require_interval(nb.b_lo, nb.b_hi, j, "b");
          },
          [&](const Ellipsoid& e) {
            require_size(e.a0, n, j, "a0");
            for (const Vector& s : e.spans) require_size(s, n, j, "span");
            require_interval(e.b_lo, e.b_hi, j, "b");
          },
          [&](const Ball& b) {
            require_size(b.a_bar, n, j, "a_bar");
            if (!(b.alpha >= 0.0)) {
              throw Error(ErrorCode::BadInterval, where(j) + "alpha must be >= 0", j);
            }
          },
      },
      set);
}

}  // namespace

std::string_view kind_name(const UncertaintySet& set) {
  return std::visit(overloaded{
                        [](const Singleton&) { return std::string_view("singleton"); },
                        [](const Polytope&) { return std::string_view("polytope"); },
                        [](const Box&) { return std::string_view("box"); },
                        [](const NormBall&) { return std::string_view("norm_ball"); },
                        [](const Ellipsoid&) { return std::string_view("ellipsoid"); },
                        [](const Ball&) { return std::string_view("ball"); },
                    },
                    set);
}

ValidatedProblem validate_problem(UncertainMOLP problem, SignGate gate) {
  const Index m = problem.m;
  const Index n = problem.n;
  if (m < 1 || n < 1) {
    throw Error(ErrorCode::DimensionMismatch, "m and n must be positive");
  }
  if (problem.c_bar.rows() != m || problem.c_bar.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "C_bar must be m x n");
  }
  if (problem.u.size() != m) throw Error(ErrorCode::DimensionMismatch, "u must have m entries");
  if (problem.v.size() != n) throw Error(ErrorCode::DimensionMismatch, "v must have n entries");
  if (problem.constraints.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "at least one constraint is required");
  }
  if (gate == SignGate::Enforce) {
    for (Index i = 0; i < m; ++i) {
      if (problem.u(i) < 0.0) {
        throw Error(ErrorCode::NegativeU,
                    "u must be componentwise nonnegative (u in R^m_+); u[" +
                        std::to_string(i) + "] < 0");
      }
    }
  }
  for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
    validate_constraint(problem.constraints[j], n, j);
  }
  return ValidatedProblem(std::move(problem), gate);
}

double ConcaveRow::value(const Vector& x) const {
  return a.dot(x) - b - norm_value(inner(x), norm);
}

Vector ConcaveRow::witness(const Vector& x) const {
  return norm_subgradient(inner(x), norm);
}

Vector ConcaveRow::supergradient(const Vector& x) const {
  return a - m.transpose() * witness(x);
}

DataPoint ConcaveRow::scenario(const Vector& w) const {
  return {a - m.transpose() * w, b + c.dot(w)};
}

bool RobustFeasibleSet::all_linear() const {
  for (const ReducedRow& r : rows) {
    if (!std::holds_alternative<LinearRow>(r)) return false;
  }
  return true;
}

std::vector<LinearRow> RobustFeasibleSet::linear_rows() const {
  std::vector<LinearRow> out;
  for (const ReducedRow& r : rows) {
    if (const auto* lr = std::get_if<LinearRow>(&r)) out.push_back(*lr);
  }
  return out;
}

double RobustFeasibleSet::row_slack(std::size_t i, const Vector& x) const {
  return std::visit([&](const auto& row) {
    if constexpr (std::is_same_v<std::decay_t<decltype(row)>, LinearRow>) {
      return row.slack(x);
    } else {
      return row.value(x);
    }
  }, rows[i]);
}

double RobustFeasibleSet::min_slack(const Vector& x) const {
  double best = kInf;
  for (std::size_t i = 0; i < rows.size(); ++i) best = std::min(best, row_slack(i, x));
  return best;
}

ConcaveRow ball_row(const Vector& a_bar, double b_bar, double alpha,
                    std::size_t constraint) {
  const Index n = a_bar.size();
  ConcaveRow row;
  row.a = a_bar;
  row.b = b_bar;
  row.m = Matrix::Zero(n + 1, n);
  row.m.topRows(n) = alpha * Matrix::Identity(n, n);
  row.c = Vector::Zero(n + 1);
  row.c(n) = -alpha;
  row.norm = NormIndex::Two;
  row.constraint = constraint;
  return row;
}

RobustFeasibleSet reduce_constraints(std::span<const UncertaintySet> constraints,
                                     Index n) {
  RobustFeasibleSet out;
  out.n = n;
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    std::visit(
        overloaded{
            [&](const Singleton& s) { out.rows.emplace_back(LinearRow{s.a_bar, s.b_bar, j, 0}); },
            [&](const Polytope& p) {
              for (std::size_t k = 0; k < p.vertices.size(); ++k) {
                out.rows.emplace_back(LinearRow{p.vertices[k].a, p.vertices[k].b, j, k});
              }
            },
            [&](const Box& box) {
              if (n > kMaxBoxDimension) {
                throw Error(ErrorCode::BoxTooLarge,
                            where(j) + "box vertex enumeration is capped at n = 16", j);
              }
              const std::size_t count = std::size_t{1} << static_cast<unsigned>(n);
              for (std::size_t l = 0; l < count; ++l) {
                Vector a(n);
                for (Index i = 0; i < n; ++i) {
                  a(i) = (l >> static_cast<unsigned>(i)) & 1U ? box.a_hi(i) : box.a_lo(i);
                }
                out.rows.emplace_back(LinearRow{std::move(a), box.b_hi, j, l});
              }
            },
            [&](const NormBall& nb) {
              ConcaveRow row;
              row.a = nb.a_bar;
              row.b = nb.b_hi;
              // sup over ||Z v||_s <= 1 of v'x is ||Z^{-T} x||_{s*}.
              row.m = nb.delta * invert_symmetric(nb.z).transpose();
              row.c = Vector::Zero(n);
              row.norm = dual_index(nb.s);
              row.constraint = j;
              out.rows.emplace_back(std::move(row));
            },
            [&](const Ellipsoid& e) {
              ConcaveRow row;
              row.a = e.a0;
              row.b = e.b_hi;
              row.m = Matrix::Zero(static_cast<Index>(e.spans.size()), n);
              for (std::size_t l = 0; l < e.spans.size(); ++l) {
                row.m.row(static_cast<Index>(l)) = e.spans[l].transpose();
              }
              row.c = Vector::Zero(row.m.rows());
              row.norm = NormIndex::Two;
              row.constraint = j;
              out.rows.emplace_back(std::move(row));
            },
            [&](const Ball& b) { out.rows.emplace_back(ball_row(b.a_bar, b.b_bar, b.alpha, j)); },
        },
        constraints[j]);
  }
  return out;
}

RobustFeasibleSet reduce_constraints(const ValidatedProblem& problem) {
  return reduce_constraints(problem->constraints, problem->n);
}

Matrix scenario_objective(const UncertainMOLP& problem, double rho) {
  return problem.c_bar + rho * problem.u * problem.v.transpose();
}

EndpointObjectives endpoint_objectives(const ValidatedProblem& problem) {
  return {problem->c_bar, scenario_objective(problem.problem(), 1.0)};
}

}  // namespace rmolp
