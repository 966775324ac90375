#include "rmolp/error.hpp"
#include "rmolp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace rmolp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeU: return "NegativeU";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularZ: return "SingularZ";
    case ErrorCode::EmptyVertexList: return "EmptyVertexList";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::BoxTooLarge: return "BoxTooLarge";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NominalInfeasible: return "NominalInfeasible";
    case ErrorCode::NonCertified: return "NonCertified";
    case ErrorCode::NotFeasiblePoint: return "NotFeasiblePoint";
    case ErrorCode::SlaterViolated: return "SlaterViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

NormIndex dual_index(NormIndex s) {
  switch (s) {
    case NormIndex::One: return NormIndex::Inf;
    case NormIndex::Two: return NormIndex::Two;
    case NormIndex::Inf: return NormIndex::One;
  }
  return NormIndex::Two;
}

double norm_value(const Vector& x, NormIndex s) {
  if (x.size() == 0) return 0.0;
  switch (s) {
    case NormIndex::One: return x.lpNorm<1>();
    case NormIndex::Two: return x.norm();
    case NormIndex::Inf: return x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

double dual_norm_value(const Vector& x, NormIndex s) {
  return norm_value(x, dual_index(s));
}

Vector norm_subgradient(const Vector& x, NormIndex s) {
  Vector w = Vector::Zero(x.size());
  if (x.size() == 0) return w;
  switch (s) {
    case NormIndex::Two: {
      const double nrm = x.norm();
      if (nrm > 0.0) w = x / nrm;
      break;
    }
    case NormIndex::One:
      for (Index i = 0; i < x.size(); ++i) {
        w(i) = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
      }
      break;
    case NormIndex::Inf: {
      Index arg = 0;
      x.cwiseAbs().maxCoeff(&arg);
      if (x(arg) != 0.0) w(arg) = x(arg) > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return w;
}

double scaled_determinant(const Matrix& z) {
  if (z.rows() != z.cols() || z.rows() == 0) return 0.0;
  double row_product = 1.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const double r = z.row(i).norm();
    if (r == 0.0) return 0.0;
    row_product *= r;
  }
  return std::abs(z.partialPivLu().determinant()) / row_product;
}

Matrix invert_symmetric(const Matrix& z) {
  if (z.rows() != z.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Z must be square");
  }
  if (scaled_determinant(z) <= 1e-12) {
    throw Error(ErrorCode::SingularZ, "Z is numerically singular");
  }
  return z.partialPivLu().inverse();
}

namespace {

// Projection onto {(y, t) : ||y||_1 <= t}.
Vector project_l1_cone(const Vector& point) {
  const Index d = point.size() - 1;
  const Vector y0 = point.head(d);
  const double t0 = point(d);
  if (y0.lpNorm<1>() <= t0) return point;
  if (d == 0 || y0.lpNorm<Eigen::Infinity>() <= -t0) {
    return Vector::Zero(point.size());
  }
  std::vector<double> mags(y0.data(), y0.data() + d);
  for (double& m : mags) m = std::abs(m);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // theta solves ||soft(y0, theta)||_1 = t0 + theta, piecewise linear in theta.
  double theta = 0.0;
  double partial = 0.0;
  for (Index k = 1; k <= d; ++k) {
    partial += mags[static_cast<std::size_t>(k - 1)];
    const double candidate = (partial - t0) / static_cast<double>(k + 1);
    const double upper = mags[static_cast<std::size_t>(k - 1)];
    const double lower = k < d ? mags[static_cast<std::size_t>(k)] : 0.0;
    theta = candidate;
    if (candidate <= upper && candidate >= lower) break;
  }
  theta = std::max(theta, 0.0);
  Vector out(point.size());
  for (Index i = 0; i < d; ++i) {
    const double shrunk = std::max(std::abs(y0(i)) - theta, 0.0);
    out(i) = y0(i) >= 0.0 ? shrunk : -shrunk;
  }
  out(d) = t0 + theta;
  return out;
}

Vector project_l2_cone(const Vector& point) {
  const Index d = point.size() - 1;
  const double t = point(d);
  const double ny = point.head(d).norm();
  if (ny <= t) return point;
  if (ny <= -t) return Vector::Zero(point.size());
  const double scale = 0.5 * (ny + t);
  Vector out(point.size());
  out.head(d) = point.head(d) * (scale / ny);
  out(d) = scale;
  return out;
}

}  // namespace

Vector project_norm_cone(const Vector& point, NormIndex s) {
  switch (s) {
    case NormIndex::Two: return project_l2_cone(point);
    case NormIndex::One: return project_l1_cone(point);
    case NormIndex::Inf:
      // Moreau decomposition: the polar of the inf-norm cone is minus the
      // 1-norm cone.
      return point + project_l1_cone(-point);
  }
  return point;
}

}  // namespace rmolp
