#include "rmolp/numerics.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace rmolp {

// Sort-and-threshold projection: x = max(y - theta, 0) with theta chosen so
// the positive part sums to one.
Vector project_simplex(const Vector& y) {
  const Index d = y.size();
  if (d == 0) return y;
  std::vector<double> sorted(y.data(), y.data() + d);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < d; ++j) {
    cumulative += sorted[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  Vector x = (y.array() - theta).cwiseMax(0.0).matrix();
  const double total = x.sum();
  if (total > 0.0) x /= total;
  return x;
}

}  // namespace rmolp
