#include "rmolp/error.hpp"
#include "rmolp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rmolp {

namespace {

constexpr std::size_t kMaxIterations = 1000000;
constexpr double kGradientMappingTolerance = 1e-10;
constexpr double kVariationalTolerance = 1e-8;

// Columns of `gens` are the points followed by the ray.
struct Generators {
  Matrix gens;
  Index points;
};

bool variational_inequality_holds(const Generators& g, const Vector& p,
                                  double tol) {
  const double nn = p.squaredNorm();
  for (Index j = 0; j < g.points; ++j) {
    if (g.gens.col(j).dot(p) < nn - tol) return false;
  }
  return g.gens.col(g.points).dot(p) >= -tol;
}

// Wolfe-style active-set refinement on the support of `w`: alternate between
// the affine minimizer over the current support (with line search back into
// the feasible set) and adding the most violating generator.
bool polish(const Generators& g, Vector& w) {
  const Index cols = g.gens.cols();
  std::vector<char> in(static_cast<std::size_t>(cols), 0);
  for (Index j = 0; j < cols; ++j) in[static_cast<std::size_t>(j)] = w(j) > 1e-9;

  bool any_point = false;
  for (Index j = 0; j < g.points; ++j) any_point |= in[static_cast<std::size_t>(j)] != 0;
  if (!any_point && g.points > 0) {
    Index arg = 0;
    w.head(g.points).maxCoeff(&arg);
    in[static_cast<std::size_t>(arg)] = 1;
  }
  for (Index j = 0; j < cols; ++j) {
    if (!in[static_cast<std::size_t>(j)]) w(j) = 0.0;
  }
  const double mass = w.head(g.points).sum();
  if (mass <= 0.0) {
    w.head(g.points).setZero();
    for (Index j = 0; j < g.points; ++j) {
      if (in[static_cast<std::size_t>(j)]) {
        w(j) = 1.0;
        break;
      }
    }
  } else {
    w.head(g.points) /= mass;
  }

  for (int major = 0; major < 500; ++major) {
    for (int minor = 0; minor < 500; ++minor) {
      std::vector<Index> support;
      for (Index j = 0; j < cols; ++j) {
        if (in[static_cast<std::size_t>(j)]) support.push_back(j);
      }
      const Index k = static_cast<Index>(support.size());
      Matrix gs(g.gens.rows(), k);
      for (Index i = 0; i < k; ++i) gs.col(i) = g.gens.col(support[static_cast<std::size_t>(i)]);
      Matrix kkt = Matrix::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = 2.0 * gs.transpose() * gs;
      for (Index i = 0; i < k; ++i) {
        const double e = support[static_cast<std::size_t>(i)] < g.points ? 1.0 : 0.0;
        kkt(i, k) = e;
        kkt(k, i) = e;
      }
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      Vector c = sol.head(k);

      if (c.minCoeff() >= -1e-14) {
        for (Index i = 0; i < k; ++i) {
          w(support[static_cast<std::size_t>(i)]) = std::max(c(i), 0.0);
        }
        break;
      }
      double theta = 1.0;
      for (Index i = 0; i < k; ++i) {
        if (c(i) < 0.0) {
          const double wi = w(support[static_cast<std::size_t>(i)]);
          theta = std::min(theta, wi / (wi - c(i)));
        }
      }
      for (Index i = 0; i < k; ++i) {
        const Index j = support[static_cast<std::size_t>(i)];
        w(j) += theta * (c(i) - w(j));
      }
      Index kept_points = 0;
      for (Index j : support) {
        if (w(j) <= 1e-14) {
          w(j) = 0.0;
          in[static_cast<std::size_t>(j)] = 0;
        } else if (j < g.points) {
          ++kept_points;
        }
      }
      if (kept_points == 0) return false;
    }

    const Vector p = g.gens * w;
    const double nn = p.squaredNorm();
    const double add_tol = 1e-13 * std::max(1.0, nn);
    Index entering = -1;
    double worst = add_tol;
    for (Index j = 0; j < cols; ++j) {
      if (in[static_cast<std::size_t>(j)]) continue;
      const double d = g.gens.col(j).dot(p);
      const double violation = j < g.points ? nn - d : -d;
      if (violation > worst) {
        worst = violation;
        entering = j;
      }
    }
    if (entering < 0) return true;
    in[static_cast<std::size_t>(entering)] = 1;
    w(entering) = 0.0;
  }
  return false;
}

double gradient_mapping(const Generators& g, const Vector& w, double lipschitz) {
  const Vector grad = 2.0 * g.gens.transpose() * (g.gens * w);
  Vector stepped(w.size());
  stepped.head(g.points) = project_simplex(w.head(g.points) - grad.head(g.points) / lipschitz);
  stepped(g.points) = std::max(0.0, w(g.points) - grad(g.points) / lipschitz);
  return lipschitz * (w - stepped).norm();
}

}  // namespace

MinNormResult min_norm_point(std::span<const Vector> points, const Vector& ray) {
  if (points.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "min_norm_point needs at least one point");
  }
  const Index k = ray.size();
  const Index p = static_cast<Index>(points.size());
  Generators g{Matrix(k, p + 1), p};
  for (Index j = 0; j < p; ++j) {
    if (points[static_cast<std::size_t>(j)].size() != k) {
      throw Error(ErrorCode::DimensionMismatch, "point dimension differs from ray");
    }
    g.gens.col(j) = points[static_cast<std::size_t>(j)];
  }
  g.gens.col(p) = ray;

  const Matrix gram = g.gens.transpose() * g.gens;
  const double lipschitz =
      std::max(2.0 * Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .maxCoeff(),
               1e-300);

  Vector w = Vector::Zero(p + 1);
  w.head(p).setConstant(1.0 / static_cast<double>(p));

  MinNormResult out;
  bool polished = false;
  std::size_t it = 0;
  for (; it < kMaxIterations; ++it) {
    if (it % 250 == 50) {
      Vector trial = w;
      if (polish(g, trial) &&
          variational_inequality_holds(g, g.gens * trial, kVariationalTolerance)) {
        w = trial;
        polished = true;
        break;
      }
    }
    const Vector grad = 2.0 * g.gens.transpose() * (g.gens * w);
    Vector next(p + 1);
    next.head(p) = project_simplex(w.head(p) - grad.head(p) / lipschitz);
    next(p) = std::max(0.0, w(p) - grad(p) / lipschitz);
    const double step = lipschitz * (w - next).norm();
    w = next;
    if (step <= kGradientMappingTolerance) break;
  }
  if (!polished) {
    Vector trial = w;
    if (polish(g, trial) &&
        (g.gens * trial).squaredNorm() <= (g.gens * w).squaredNorm() + 1e-14) {
      w = trial;
    }
  }

  out.weights = w.head(p);
  out.ray_weight = w(p);
  out.point = g.gens * w;
  out.iterations = it;
  out.gradient_mapping = gradient_mapping(g, w, lipschitz);
  out.certified =
      variational_inequality_holds(g, out.point, kVariationalTolerance) &&
      std::abs(out.weights.sum() - 1.0) <= 1e-12 && out.weights.minCoeff() >= 0.0 &&
      out.ray_weight >= 0.0;
  return out;
}

}  // namespace rmolp
