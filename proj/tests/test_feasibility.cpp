#include "rmolp/error.hpp"
#include "rmolp/feasibility.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

namespace rmolp {
namespace {

using testing::Rng;
using testing::vec;

Vector extended(const DataPoint& d) {
  Vector e(d.a.size() + 1);
  e << d.a, d.b;
  return e;
}

/// Rows a'x >= b with a known strictly feasible point.
std::vector<DataPoint> random_feasible_system(Rng& rng, Index n, int p) {
  const Vector x0 = rng.uniforms(n, -2, 2);
  std::vector<DataPoint> rows;
  for (int j = 0; j < p; ++j) {
    const Vector a = rng.uniforms(n, -3, 3);
    rows.push_back({a, a.dot(x0) - rng.uniform(0.1, 3)});
  }
  return rows;
}

std::vector<DataPoint> random_integer_system(Rng& rng) {
  const Index n = rng.integer(1, 3);
  const int p = rng.integer(1, 6);
  std::vector<DataPoint> rows;
  for (int j = 0; j < p; ++j) rows.push_back({rng.integers(n, -3, 3), double(rng.integer(-3, 3))});
  if (rng.integer(0, 1) == 1) {
    // Append the negated sum with a raised right-hand side: usually infeasible.
    DataPoint neg{Vector::Zero(n), 0.0};
    for (const DataPoint& r : rows) {
      neg.a -= r.a;
      neg.b -= r.b;
    }
    neg.b += rng.integer(0, 2);
    rows.push_back(neg);
  }
  return rows;
}

TEST(IsFeasible, Examples) {
  const auto rows = testing::five_rows();
  const auto r = is_feasible(rows);
  ASSERT_TRUE(std::holds_alternative<FeasiblePoint>(r));
  EXPECT_GE(testing::min_slack(rows, std::get<FeasiblePoint>(r).x), -1e-9);

  const std::vector<DataPoint> bad = {{vec({1}), 1}, {vec({-1}), 0}};
  EXPECT_TRUE(std::holds_alternative<InfeasibleSystem>(is_feasible(bad)));
}

TEST(ConeContains, Examples) {
  const std::vector<Vector> gens = {vec({1, 0}), vec({0, 1})};
  const ConeMembership in = cone_contains(gens, vec({2, 3}));
  ASSERT_TRUE(in.contained);
  EXPECT_NEAR(in.weights(0), 2, 1e-9);
  EXPECT_NEAR(in.weights(1), 3, 1e-9);
  EXPECT_FALSE(cone_contains(gens, vec({-1, 1})).contained);
  EXPECT_TRUE(cone_contains(gens, vec({0, 0})).contained);
}

TEST(FeasibilityAlternative, CertificatesReplayOnRandomSystems) {
  Rng rng(101);
  int infeasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = random_integer_system(rng);
    const Index n = rows.front().a.size();
    std::vector<Vector> gens;
    for (const DataPoint& r : rows) gens.push_back(extended(r));
    Vector target = Vector::Zero(n + 1);
    target(n) = 1;
    const auto feas = is_feasible(rows);
    const ConeMembership cone = cone_contains(gens, target);
    EXPECT_EQ(std::holds_alternative<InfeasibleSystem>(feas), cone.contained);
    if (const auto* fp = std::get_if<FeasiblePoint>(&feas)) {
      EXPECT_GE(testing::min_slack(rows, fp->x), -1e-9);
    }
    if (cone.contained) {
      ++infeasible;
      Vector combo = Vector::Zero(n + 1);
      for (std::size_t j = 0; j < gens.size(); ++j) {
        EXPECT_GE(cone.weights(Index(j)), -1e-12);
        combo += cone.weights(Index(j)) * gens[j];
      }
      EXPECT_LE((combo - target).lpNorm<Eigen::Infinity>(), 1e-8);
    }
  }
  EXPECT_GT(infeasible, 10);
  EXPECT_LT(infeasible, 90);
}

TEST(HypographicalSet, PointsAndRay) {
  const auto h = hypographical_set(testing::five_rows());
  ASSERT_EQ(h.points.size(), 5u);
  EXPECT_EQ(h.points[0], vec({-2, -1, -2, -6}));
  EXPECT_EQ(h.ray, vec({0, 0, 0, -1}));
  EXPECT_THROW(hypographical_set(std::vector<DataPoint>{}), std::invalid_argument);
}

TEST(Radius, FiveRowExample) {
  const auto t0 = std::chrono::steady_clock::now();
  const RadiusResult r = radius_of_robust_feasibility(testing::five_rows());
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
  EXPECT_NEAR(r.rho, std::sqrt(28.0 / 3.0), 1e-6);
  const Vector expected = vec({-1.0 / 3, -1.0 / 3, -1.0 / 3, -3});
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(r.p_star(i), expected(i), 1e-5);
  EXPECT_TRUE(r.certified);
}

TEST(Radius, SingleRow) {
  const RadiusResult r = radius_of_robust_feasibility(std::vector<DataPoint>{{vec({1}), 0}});
  EXPECT_NEAR(r.rho, 1.0, 1e-9);
}

TEST(Radius, NominalInfeasibleThrows) {
  try {
    radius_of_robust_feasibility(std::vector<DataPoint>{{vec({1}), 1}, {vec({-1}), 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NominalInfeasible);
  }
}

TEST(Radius, TwoRowSystemsMatchGridOracle) {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.integer(1, 3);
    const auto rows = random_feasible_system(rng, n, 2);
    const RadiusResult r = radius_of_robust_feasibility(rows);
    const double grid = testing::two_point_distance(extended(rows[0]), extended(rows[1]));
    // The grid oracle overestimates by at most step * |p1 - p2|.
    EXPECT_LE(r.rho, grid + 1e-9);
    EXPECT_GE(r.rho, grid - 1e-5 * (extended(rows[0]) - extended(rows[1])).norm() - 1e-9);
  }
}

TEST(Radius, MinimizerIsNearestAmongSampledCombinations) {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.integer(1, 3);
    const auto rows = random_feasible_system(rng, n, rng.integer(1, 5));
    const RadiusResult r = radius_of_robust_feasibility(rows);
    EXPECT_NEAR(r.p_star.norm(), r.rho, 1e-9);
    for (int k = 0; k < 200; ++k) {
      Vector q = Vector::Zero(n + 1);
      double total = 0;
      std::vector<double> w;
      for (std::size_t j = 0; j < rows.size(); ++j) w.push_back(rng.uniform(0, 1)), total += w.back();
      for (std::size_t j = 0; j < rows.size(); ++j) q += (w[j] / total) * extended(rows[j]);
      q(n) -= rng.uniform(0, 5);
      EXPECT_GE(q.norm(), r.rho - 1e-9);
    }
  }
}

TEST(BallFeasibility, FiveRowBracket) {
  const auto rows = testing::five_rows();
  const BallFeasibility lo = ball_robust_feasible(rows, 2.9);
  ASSERT_EQ(lo.verdict, BallVerdict::Feasible);
  EXPECT_GE(testing::ball_min_slack(rows, *lo.x, 2.9), -1e-8);
  EXPECT_EQ(ball_robust_feasible(rows, 3.2).verdict, BallVerdict::Infeasible);
  EXPECT_EQ(ball_robust_feasible(rows, std::sqrt(28.0 / 3.0)).verdict, BallVerdict::Inconclusive);
  EXPECT_EQ(ball_robust_feasible(rows, 0.0).verdict, BallVerdict::Feasible);
}

TEST(BallFeasibility, RandomBracketsReplay) {
  Rng rng(404);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.integer(1, 3);
    const auto rows = random_feasible_system(rng, n, rng.integer(1, 5));
    const double rho = radius_of_robust_feasibility(rows).rho;
    if (rho < 1e-3) continue;
    ++checked;
    const BallFeasibility below = ball_robust_feasible(rows, 0.9 * rho);
    ASSERT_EQ(below.verdict, BallVerdict::Feasible);
    EXPECT_GE(testing::ball_min_slack(rows, *below.x, 0.9 * rho), -1e-8);
    const BallFeasibility above = ball_robust_feasible(rows, 1.1 * rho);
    ASSERT_EQ(above.verdict, BallVerdict::Infeasible);
    // Shift every row by the nearest point (plus a sliver in b) and replay the
    // Farkas combination of the shifted system.
    const RadiusResult& rr = above.radius;
    Vector combo = Vector::Zero(n + 1);
    for (std::size_t j = 0; j < rows.size(); ++j) combo += rr.lambda(Index(j)) * extended(rows[j]);
    combo(n) -= rr.mu;
    EXPECT_LE((combo - rr.p_star).norm(), 1e-7);
    EXPECT_NEAR(rr.lambda.sum(), 1.0, 1e-9);
    EXPECT_GE(rr.lambda.minCoeff(), -1e-12);
    const double eps = 0.05 * rho;
    Vector shift = -rr.p_star;
    shift(n) += eps;
    EXPECT_LT(shift.norm(), 1.1 * rho);
    double rhs = 0;
    Vector lhs = Vector::Zero(n);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      lhs += rr.lambda(Index(j)) * (rows[j].a + shift.head(n));
      rhs += rr.lambda(Index(j)) * (rows[j].b + shift(n));
    }
    EXPECT_LE(lhs.norm(), 1e-7);
    EXPECT_GT(rhs, 0.5 * eps);
  }
  EXPECT_GT(checked, 20);
}

TEST(MaximizeMinSlack, ImprovesOnStart) {
  std::vector<UncertaintySet> cs;
  for (const DataPoint& r : testing::five_rows()) cs.push_back(Singleton{r.a, r.b});
  const RobustFeasibleSet set = reduce_constraints(cs, 3);
  const MinSlackAscent best = maximize_min_slack(set, vec({5, 5, 5}));
  EXPECT_GT(best.value, set.min_slack(vec({5, 5, 5})));
  EXPECT_NEAR(best.value, set.min_slack(best.x), 1e-12);
}

}  // namespace
}  // namespace rmolp
