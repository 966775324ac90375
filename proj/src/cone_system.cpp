#include "rmolp/error.hpp"
#include "rmolp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rmolp {

std::size_t ConeFeasibilitySystem::add_block(BlockKind kind, Index size,
                                             NormIndex norm) {
  blocks.push_back({kind, size, norm});
  return blocks.size() - 1;
}

std::size_t ConeFeasibilitySystem::add_cone(Index dimension, NormIndex norm) {
  return add_block(BlockKind::Cone, dimension + 1, norm);
}

Index ConeFeasibilitySystem::dimension() const {
  Index total = 0;
  for (const VariableBlock& b : blocks) total += b.size;
  return total;
}

Index ConeFeasibilitySystem::equality_rows() const {
  Index total = 0;
  for (const EqualityGroup& e : equalities) total += e.rhs.size();
  return total;
}

bool ConeFeasibilitySystem::polyhedral() const {
  return std::none_of(blocks.begin(), blocks.end(), [](const VariableBlock& b) {
    return b.kind == BlockKind::Cone && b.norm == NormIndex::Two;
  });
}

namespace {

constexpr std::size_t kMaxGradientIterations = 200000;
constexpr double kTargetResidual = 1e-11;

struct Stacked {
  Matrix a;
  Vector b;
  std::vector<Index> offsets;
};

Stacked stack(const ConeFeasibilitySystem& sys) {
  Stacked s;
  Index offset = 0;
  for (const VariableBlock& blk : sys.blocks) {
    s.offsets.push_back(offset);
    offset += blk.size;
  }
  const Index rows = sys.equality_rows();
  s.a = Matrix::Zero(rows, offset);
  s.b = Vector::Zero(rows);
  Index row = 0;
  for (const EqualityGroup& eq : sys.equalities) {
    const Index k = eq.rhs.size();
    for (const EqualityTerm& term : eq.terms) {
      if (term.block >= sys.blocks.size()) {
        throw Error(ErrorCode::DimensionMismatch, "equality references unknown block");
      }
      const VariableBlock& blk = sys.blocks[term.block];
      if (term.coeffs.rows() != k || term.coeffs.cols() != blk.size) {
        throw Error(ErrorCode::DimensionMismatch, "equality term has wrong shape");
      }
      s.a.block(row, s.offsets[term.block], k, blk.size) += term.coeffs;
    }
    s.b.segment(row, k) = eq.rhs;
    row += k;
  }
  // Unit max-abs coefficient per row.
  for (Index i = 0; i < rows; ++i) {
    const double scale = s.a.row(i).lpNorm<Eigen::Infinity>();
    if (scale > 0.0) {
      s.a.row(i) /= scale;
      s.b(i) /= scale;
    }
  }
  return s;
}

std::vector<Vector> split(const ConeFeasibilitySystem& sys, const Stacked& s,
                          const Vector& z) {
  std::vector<Vector> out;
  for (std::size_t k = 0; k < sys.blocks.size(); ++k) {
    out.push_back(z.segment(s.offsets[k], sys.blocks[k].size));
  }
  return out;
}

void project_blocks(const ConeFeasibilitySystem& sys, const Stacked& s, Vector& z) {
  for (std::size_t k = 0; k < sys.blocks.size(); ++k) {
    const VariableBlock& blk = sys.blocks[k];
    auto seg = z.segment(s.offsets[k], blk.size);
    switch (blk.kind) {
      case BlockKind::Free: break;
      case BlockKind::Nonneg: seg = seg.cwiseMax(0.0); break;
      case BlockKind::Simplex: seg = project_simplex(seg); break;
      case BlockKind::Cone: seg = project_norm_cone(seg, blk.norm); break;
    }
  }
}

ConeSolveResult finish(const ConeFeasibilitySystem& sys, const Stacked& s,
                       const Vector& z) {
  const double residual = s.a.rows() == 0 ? 0.0 : (s.a * z - s.b).norm();
  if (residual <= kConeFeasibilityTolerance) {
    return ConeFeasible{split(sys, s, z), residual};
  }
  return ConeResidual{residual, split(sys, s, z)};
}

// Accelerated projected gradient on 0.5 ||A z - b||^2 with adaptive restart.
ConeSolveResult solve_projected(const ConeFeasibilitySystem& sys, const Stacked& s) {
  const Index n = s.a.cols();
  Vector z = Vector::Zero(n);
  project_blocks(sys, s, z);
  if (s.a.rows() == 0) return finish(sys, s, z);

  const Matrix gram = s.a.rows() < n ? Matrix(s.a * s.a.transpose())
                                     : Matrix(s.a.transpose() * s.a);
  const double lipschitz =
      Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  if (lipschitz <= 0.0) return finish(sys, s, z);

  Vector y = z;
  Vector best = z;
  double best_residual = (s.a * z - s.b).norm();
  double momentum = 1.0;
  double checkpoint = best_residual;
  for (std::size_t it = 1; it <= kMaxGradientIterations; ++it) {
    Vector next = y - s.a.transpose() * (s.a * y - s.b) / lipschitz;
    project_blocks(sys, s, next);
    const double residual = (s.a * next - s.b).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = next;
    }
    if (best_residual <= kTargetResidual) break;

    if ((y - next).dot(next - z) > 0.0) {
      momentum = 1.0;
      y = next;
    } else {
      const double following = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + ((momentum - 1.0) / following) * (next - z);
      momentum = following;
    }
    z = next;

    if (it % 5000 == 0) {
      // Stalled above target: the system is (numerically) infeasible.
      if (best_residual > checkpoint * (1.0 - 1e-6)) break;
      checkpoint = best_residual;
    }
  }
  return finish(sys, s, best);
}

ConeSolveResult solve_linear(const ConeFeasibilitySystem& sys, const Stacked& s) {
  if (!sys.polyhedral()) {
    throw std::invalid_argument("LP path requires a polyhedral cone system");
  }
  const Index n = s.a.cols();
  const Index rows = s.a.rows();

  // Auxiliary magnitude variables for 1-norm cones.
  Index aux = 0;
  for (const VariableBlock& blk : sys.blocks) {
    if (blk.kind == BlockKind::Cone && blk.norm == NormIndex::One) aux += blk.size - 1;
  }
  const Index total = n + aux + 2 * rows;
  LinearProgram lp;
  lp.objective = Vector::Zero(total);
  lp.objective.tail(2 * rows).setOnes();
  lp.lower = Vector::Zero(total);

  auto unit_row = [&](RowSense sense, double rhs) {
    LpRow r{Vector::Zero(total), rhs, sense};
    return r;
  };

  Index next_aux = n;
  for (std::size_t k = 0; k < sys.blocks.size(); ++k) {
    const VariableBlock& blk = sys.blocks[k];
    const Index off = s.offsets[k];
    switch (blk.kind) {
      case BlockKind::Free:
        lp.lower.segment(off, blk.size).setConstant(-kInf);
        break;
      case BlockKind::Nonneg:
        break;
      case BlockKind::Simplex: {
        LpRow r = unit_row(RowSense::Equal, 1.0);
        r.coeffs.segment(off, blk.size).setOnes();
        lp.rows.push_back(std::move(r));
        break;
      }
      case BlockKind::Cone: {
        const Index d = blk.size - 1;
        const Index t = off + d;
        lp.lower.segment(off, d).setConstant(-kInf);
        if (blk.norm == NormIndex::Inf) {
          for (Index i = 0; i < d; ++i) {
            for (double sign : {1.0, -1.0}) {
              LpRow r = unit_row(RowSense::GreaterEqual, 0.0);
              r.coeffs(t) = 1.0;
              r.coeffs(off + i) = -sign;
              lp.rows.push_back(std::move(r));
            }
          }
        } else {
          LpRow budget = unit_row(RowSense::GreaterEqual, 0.0);
          budget.coeffs(t) = 1.0;
          for (Index i = 0; i < d; ++i) {
            const Index e = next_aux++;
            for (double sign : {1.0, -1.0}) {
              LpRow r = unit_row(RowSense::GreaterEqual, 0.0);
              r.coeffs(e) = 1.0;
              r.coeffs(off + i) = -sign;
              lp.rows.push_back(std::move(r));
            }
            budget.coeffs(e) = -1.0;
          }
          lp.rows.push_back(std::move(budget));
        }
        break;
      }
    }
  }
  for (Index i = 0; i < rows; ++i) {
    LpRow r = unit_row(RowSense::Equal, s.b(i));
    r.coeffs.head(n) = s.a.row(i).transpose();
    r.coeffs(n + aux + i) = 1.0;
    r.coeffs(n + aux + rows + i) = -1.0;
    lp.rows.push_back(std::move(r));
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                "residual LP of a cone system did not reach an optimum");
  }
  return finish(sys, s, sol.x.head(n));
}

}  // namespace

ConeSolveResult solve_cone_system(const ConeFeasibilitySystem& system,
                                  ConeMethod method) {
  for (const VariableBlock& blk : system.blocks) {
    if (blk.size < 0 || (blk.kind == BlockKind::Cone && blk.size < 1) ||
        (blk.kind == BlockKind::Simplex && blk.size < 1)) {
      throw Error(ErrorCode::DimensionMismatch, "malformed variable block");
    }
  }
  const Stacked s = stack(system);
  switch (method) {
    case ConeMethod::LinearProgram: return solve_linear(system, s);
    case ConeMethod::ProjectedGradient: return solve_projected(system, s);
    case ConeMethod::Automatic:
      return system.polyhedral() ? solve_linear(system, s) : solve_projected(system, s);
  }
  return solve_projected(system, s);
}

}  // namespace rmolp
