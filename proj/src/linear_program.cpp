#include "rmolp/error.hpp"
#include "rmolp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rmolp {

LinearProgram LinearProgram::free_variables(Index dimension) {
  LinearProgram lp;
  lp.objective = Vector::Zero(dimension);
  lp.lower = Vector::Constant(dimension, -kInf);
  return lp;
}

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kPhaseOneTolerance = 1e-9;
constexpr std::size_t kIterationCap = 100000;

// Standard form: min c'z  s.t.  A z = b (b >= 0), z >= 0. The tableau keeps
// one artificial column per row; those columns hold B^{-1} throughout, which
// is where the duals come from.
class DenseSimplex {
 public:
  DenseSimplex(const Matrix& a, const Vector& b)
      : rows_(a.rows()), structural_(a.cols()),
        tableau_(Matrix::Zero(a.rows() + 1, a.cols() + a.rows() + 1)),
        basis_(static_cast<std::size_t>(a.rows())) {
    tableau_.topLeftCorner(rows_, structural_) = a;
    tableau_.block(0, structural_, rows_, rows_).setIdentity();
    tableau_.col(rhs_col()).head(rows_) = b;
    for (Index i = 0; i < rows_; ++i) {
      basis_[static_cast<std::size_t>(i)] = structural_ + i;
    }
  }

  /// Phase I. Returns the sum of artificials at the optimum.
  double phase_one() {
    Vector cost = Vector::Zero(total_cols());
    cost.segment(structural_, rows_).setOnes();
    load_costs(cost);
    run(/*allow_artificial=*/true);
    double infeasibility = 0.0;
    for (Index i = 0; i < rows_; ++i) {
      if (is_artificial(basis_[static_cast<std::size_t>(i)])) {
        infeasibility += tableau_(i, rhs_col());
      }
    }
    return infeasibility;
  }

  /// Pivots basic artificials out wherever a structural column allows it.
  void expel_artificials() {
    for (Index i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      for (Index j = 0; j < structural_; ++j) {
        if (std::abs(tableau_(i, j)) > kPivotTolerance) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  /// Phase II. Returns false when unbounded.
  bool phase_two(const Vector& structural_cost) {
    Vector cost = Vector::Zero(total_cols());
    cost.head(structural_) = structural_cost;
    cost_ = cost;
    load_costs(cost);
    return run(/*allow_artificial=*/false);
  }

  Vector primal() const {
    Vector z = Vector::Zero(structural_);
    for (Index i = 0; i < rows_; ++i) {
      const Index col = basis_[static_cast<std::size_t>(i)];
      if (col < structural_) z(col) = tableau_(i, rhs_col());
    }
    return z;
  }

  /// y = c_B' B^{-1} for the current basis.
  Vector duals() const {
    Vector y = Vector::Zero(rows_);
    for (Index r = 0; r < rows_; ++r) {
      const double cb = cost_(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) y += cb * tableau_.row(r).segment(structural_, rows_).transpose();
    }
    return y;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  Index total_cols() const { return structural_ + rows_; }
  Index rhs_col() const { return structural_ + rows_; }
  bool is_artificial(Index col) const { return col >= structural_; }

  void load_costs(const Vector& cost) {
    cost_ = cost;
    auto reduced = tableau_.row(rows_);
    reduced.setZero();
    reduced.head(total_cols()) = cost.transpose();
    for (Index i = 0; i < rows_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) reduced -= cb * tableau_.row(i);
    }
    cost_scale_ = std::max(1.0, cost.lpNorm<Eigen::Infinity>());
  }

  void pivot(Index r, Index s) {
    const double inv = 1.0 / tableau_(r, s);
    tableau_.row(r) *= inv;
    tableau_(r, s) = 1.0;
    for (Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = tableau_(i, s);
      if (factor != 0.0) {
        tableau_.row(i) -= factor * tableau_.row(r);
        tableau_(i, s) = 0.0;
      }
    }
    basis_[static_cast<std::size_t>(r)] = s;
    if (++iterations_ > kIterationCap) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "simplex iteration cap of " + std::to_string(kIterationCap) +
                      " pivots exceeded");
    }
  }

  // Bland's rule: smallest-index entering column with negative reduced cost;
  // ratio ties broken by smallest basic index.
  bool run(bool allow_artificial) {
    const double rc_tol = 1e-10 * cost_scale_;
    const Index limit = allow_artificial ? total_cols() : structural_;
    for (;;) {
      Index entering = -1;
      for (Index j = 0; j < limit; ++j) {
        if (tableau_(rows_, j) < -rc_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      Index leaving = -1;
      double best_ratio = kInf;
      for (Index i = 0; i < rows_; ++i) {
        const double coef = tableau_(i, entering);
        if (coef <= kPivotTolerance) continue;
        const double ratio = std::max(tableau_(i, rhs_col()), 0.0) / coef;
        const double slack = 1e-12 * std::max(1.0, best_ratio);
        if (leaving < 0 || ratio < best_ratio - slack) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack &&
                   basis_[static_cast<std::size_t>(i)] <
                       basis_[static_cast<std::size_t>(leaving)]) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  Index rows_;
  Index structural_;
  Matrix tableau_;
  std::vector<Index> basis_;
  Vector cost_;
  double cost_scale_ = 1.0;
  std::size_t iterations_ = 0;
};

struct ColumnMap {
  Index plus = -1;
  Index minus = -1;  // -1 when the variable has a finite lower bound
  double shift = 0.0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const Index d = lp.objective.size();
  if (lp.lower.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "LP bound vector has wrong size");
  }
  for (const LpRow& row : lp.rows) {
    if (row.coeffs.size() != d) {
      throw Error(ErrorCode::DimensionMismatch, "LP row has wrong size");
    }
  }

  std::vector<ColumnMap> columns(static_cast<std::size_t>(d));
  Index next = 0;
  for (Index j = 0; j < d; ++j) {
    ColumnMap& c = columns[static_cast<std::size_t>(j)];
    c.plus = next++;
    if (std::isfinite(lp.lower(j))) {
      c.shift = lp.lower(j);
    } else {
      c.minus = next++;
    }
  }
  const Index structural_vars = next;

  // Row standardization: shift, scale, add surplus, flip to b >= 0.
  struct StdRow {
    std::size_t source;
    double scale;
    double sign;
  };
  std::vector<StdRow> kept;
  Index surplus_count = 0;
  LpSolution out;
  out.duals = Vector::Zero(static_cast<Index>(lp.rows.size()));
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LpRow& row = lp.rows[i];
    double rhs = row.rhs;
    for (Index j = 0; j < d; ++j) rhs -= row.coeffs(j) * columns[static_cast<std::size_t>(j)].shift;
    const double scale = row.coeffs.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) {
      const double tol = 1e-12 * std::max(1.0, std::abs(row.rhs));
      const bool ok = row.sense == RowSense::GreaterEqual ? rhs <= tol : std::abs(rhs) <= tol;
      if (!ok) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      continue;
    }
    kept.push_back({i, scale, 1.0});
    if (row.sense == RowSense::GreaterEqual) ++surplus_count;
  }

  const Index m = static_cast<Index>(kept.size());
  const Index n_std = structural_vars + surplus_count;
  Matrix a = Matrix::Zero(m, n_std);
  Vector b = Vector::Zero(m);
  Index surplus = structural_vars;
  for (Index r = 0; r < m; ++r) {
    StdRow& info = kept[static_cast<std::size_t>(r)];
    const LpRow& row = lp.rows[info.source];
    double rhs = row.rhs;
    for (Index j = 0; j < d; ++j) {
      const ColumnMap& c = columns[static_cast<std::size_t>(j)];
      const double v = row.coeffs(j) / info.scale;
      a(r, c.plus) = v;
      if (c.minus >= 0) a(r, c.minus) = -v;
      rhs -= row.coeffs(j) * c.shift;
    }
    if (row.sense == RowSense::GreaterEqual) a(r, surplus++) = -1.0;
    b(r) = rhs / info.scale;
    if (b(r) < 0.0) {
      info.sign = -1.0;
      a.row(r) *= -1.0;
      b(r) = -b(r);
    }
  }

  Vector cost = Vector::Zero(n_std);
  for (Index j = 0; j < d; ++j) {
    const ColumnMap& c = columns[static_cast<std::size_t>(j)];
    cost(c.plus) = lp.objective(j);
    if (c.minus >= 0) cost(c.minus) = -lp.objective(j);
  }

  DenseSimplex simplex(a, b);
  const double infeasibility = simplex.phase_one();
  if (infeasibility > kPhaseOneTolerance * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
    out.status = LpStatus::Infeasible;
    out.iterations = simplex.iterations();
    return out;
  }
  simplex.expel_artificials();
  const bool bounded = simplex.phase_two(cost);
  out.iterations = simplex.iterations();
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  const Vector z = simplex.primal();
  out.status = LpStatus::Optimal;
  out.x.resize(d);
  for (Index j = 0; j < d; ++j) {
    const ColumnMap& c = columns[static_cast<std::size_t>(j)];
    out.x(j) = c.shift + z(c.plus) - (c.minus >= 0 ? z(c.minus) : 0.0);
  }
  out.value = lp.objective.dot(out.x);

  // Map standard-form duals back to the caller's rows and check them.
  const Vector y_std = simplex.duals();
  for (Index r = 0; r < m; ++r) {
    const StdRow& info = kept[static_cast<std::size_t>(r)];
    out.duals(static_cast<Index>(info.source)) = y_std(r) * info.sign / info.scale;
  }
  Vector reduced = lp.objective;
  double dual_value = 0.0;
  double dual_infeasibility = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const double y = out.duals(static_cast<Index>(i));
    reduced -= y * lp.rows[i].coeffs;
    dual_value += y * lp.rows[i].rhs;
    if (lp.rows[i].sense == RowSense::GreaterEqual) {
      dual_infeasibility = std::max(dual_infeasibility, -y);
    }
  }
  for (Index j = 0; j < d; ++j) {
    if (std::isfinite(lp.lower(j))) {
      dual_value += lp.lower(j) * reduced(j);
      dual_infeasibility = std::max(dual_infeasibility, -reduced(j));
    } else {
      dual_infeasibility = std::max(dual_infeasibility, std::abs(reduced(j)));
    }
  }
  out.dual_value = dual_value;
  out.duality_gap = std::abs(out.value - dual_value);
  out.dual_infeasibility = dual_infeasibility;
  return out;
}

}  // namespace rmolp
