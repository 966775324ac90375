#include "rmolp/error.hpp"
#include "rmolp/oracle.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

namespace rmolp {
namespace {

using testing::Rng;
using testing::vec;

ValidatedProblem example_negative_u() {
  return validate_problem(testing::two_polytope_problem(vec({-1, 1})), SignGate::Skip);
}

EfficiencyCertificate positive_certificate(const ValidatedProblem& p) {
  const EfficiencyVerdict v = certify_weak_efficiency(p, vec({1, 1, 1.5}));
  return std::get<Certified>(v).certificate;
}

TEST(ScenarioGrid, Endpoints) {
  const ValidatedProblem p = example_negative_u();
  const auto grid = scenario_grid(p, 3);
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_EQ(grid[0], p->c_bar);
  Matrix half(2, 3);
  half << -3, 0.5, -2, 0, -2.5, -2;
  EXPECT_EQ(grid[1], half);
  EXPECT_EQ(grid[2], p->c_bar + p->u * p->v.transpose());
  EXPECT_THROW(scenario_grid(p, 1), std::invalid_argument);
}

TEST(Refute, NegativeUExampleAtMidpoint) {
  const ValidatedProblem p = example_negative_u();
  const Vector x_bar = vec({1, 1, 1.5});
  const OracleVerdict o = refute_robust_weak_efficiency(p, x_bar, 3);
  ASSERT_EQ(o.outcome, OracleOutcome::Refuted);
  ASSERT_TRUE(o.witness.has_value());
  EXPECT_EQ(o.witness->rho, 0.5);
  EXPECT_NEAR((o.witness->x - vec({0, 0, 3})).norm(), 0, 1e-9);
  const Matrix c = scenario_objective(p.problem(), 0.5);
  EXPECT_EQ(c * vec({0, 0, 3}), vec({-6, -6}));
  EXPECT_EQ(c * x_bar, vec({-5.5, -5.5}));
}

TEST(Refute, EndpointsAloneMissTheMidpoint) {
  const OracleVerdict o = refute_robust_weak_efficiency(example_negative_u(), vec({1, 1, 1.5}), 2);
  EXPECT_EQ(o.outcome, OracleOutcome::Confirmed);
  EXPECT_EQ(o.checks.scenarios, 2u);
}

TEST(Refute, NestedGridsNeverUndoRefutation) {
  const ValidatedProblem p = example_negative_u();
  for (std::size_t k : {3u, 5u, 9u, 17u}) {
    EXPECT_EQ(refute_robust_weak_efficiency(p, vec({1, 1, 1.5}), k).outcome, OracleOutcome::Refuted);
  }
}

TEST(Refute, PointOutsideThrows) {
  try {
    refute_robust_weak_efficiency(example_negative_u(), vec({5, 5, 5}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFeasiblePoint);
  }
}

TEST(Refute, NonlinearSetNeverConfirms) {
  UncertainMOLP p;
  p.m = 1;
  p.n = 1;
  p.c_bar = Matrix::Constant(1, 1, 1);
  p.u = vec({0});
  p.v = vec({0});
  p.constraints.push_back(NormBall{vec({1}), Matrix::Identity(1, 1), 0.5, NormIndex::Two, 0, 0});
  const OracleVerdict o = refute_robust_weak_efficiency(validate_problem(p), vec({0}), 4);
  EXPECT_EQ(o.outcome, OracleOutcome::Inconclusive);
}

TEST(Refute, WitnessesReplayOnRandomInstances) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = testing::random_polyhedral(rng);
    if (!inst) continue;
    // Allow a sign-indefinite u here; the oracle does not need u >= 0.
    inst->problem.u = rng.integers(inst->problem.m, -3, 3);
    const ValidatedProblem p = validate_problem(inst->problem, SignGate::Skip);
    const OracleVerdict o = refute_robust_weak_efficiency(p, inst->vertex, 5);
    if (o.outcome != OracleOutcome::Refuted) continue;
    const Matrix c = scenario_objective(p.problem(), o.witness->rho);
    EXPECT_GE(testing::min_slack(testing::polyhedral_rows(p.problem()), o.witness->x), -1e-9);
    EXPECT_GT((c * inst->vertex - c * o.witness->x).minCoeff(), 0.0);
  }
}

TEST(Verify, PositiveCertificatePasses) {
  const ValidatedProblem p = validate_problem(testing::two_polytope_problem(vec({1, 0})));
  const VerificationReport r = verify_certificate(p, vec({1, 1, 1.5}), positive_certificate(p), 1e-7);
  EXPECT_TRUE(r.valid) << r.first_failure;
  EXPECT_EQ(r.checks.size(), 10u);
}

TEST(Verify, TamperedWeightsFailEquality) {
  const ValidatedProblem p = validate_problem(testing::two_polytope_problem(vec({1, 0})));
  EfficiencyCertificate cert = positive_certificate(p);
  cert.nominal.lambda = vec({0.7, 0.3});
  const VerificationReport r = verify_certificate(p, vec({1, 1, 1.5}), cert, 1e-7);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.first_failure, "endpoint_equality_nominal");
}

TEST(Verify, EachTamperNamesItsCheck) {
  const ValidatedProblem p = validate_problem(testing::two_polytope_problem(vec({1, 0})));
  const EfficiencyCertificate base = positive_certificate(p);
  const Vector x_bar = vec({1, 1, 1.5});
  auto first_failure = [&](auto tamper, const Vector& x) {
    EfficiencyCertificate cert = base;
    tamper(cert);
    return verify_certificate(p, x, cert, 1e-7).first_failure;
  };
  EXPECT_EQ(first_failure([](EfficiencyCertificate& c) { c.nominal.lambda = vec({1}); }, x_bar),
            "structure");
  EXPECT_EQ(first_failure([](EfficiencyCertificate&) {}, vec({5, 5, 5})), "point_feasibility");
  EXPECT_EQ(first_failure([](EfficiencyCertificate& c) { c.perturbed.lambda *= 2; }, x_bar),
            "simplex_perturbed");
  EXPECT_EQ(first_failure([](EfficiencyCertificate& c) { c.nominal.multipliers[0].mu = -1; }, x_bar),
            "multiplier_signs");
  EXPECT_EQ(first_failure([](EfficiencyCertificate& c) { c.nominal.multipliers[0].scenario.b += 1; },
                          x_bar),
            "scenario_membership");
  EXPECT_EQ(first_failure([](EfficiencyCertificate& c) { c.nominal.multipliers[0].derivation = 7; },
                          x_bar),
            "structure");
}

TEST(Verify, ZeroMultipliersWithOpposingObjectives) {
  UncertainMOLP prob;
  prob.m = 2;
  prob.n = 1;
  prob.c_bar = (Matrix(2, 1) << 1, -1).finished();
  prob.u = vec({0, 0});
  prob.v = vec({0});
  prob.constraints.push_back(Singleton{vec({1}), 0});
  const ValidatedProblem p = validate_problem(prob);
  EfficiencyCertificate cert;
  cert.nominal.lambda = vec({0.5, 0.5});
  cert.perturbed.lambda = vec({0.5, 0.5});
  cert.nominal.multipliers.push_back({0, 0, 0.0, {vec({1}), 0}, std::nullopt, 0.0});
  cert.perturbed = cert.nominal;
  EXPECT_TRUE(verify_certificate(p, vec({1}), cert, 1e-7).valid);
}

TEST(Verify, NormCertificateRoundTrip) {
  UncertainMOLP prob;
  prob.m = 1;
  prob.n = 2;
  prob.c_bar = (Matrix(1, 2) << 1, 1).finished();
  prob.u = vec({1});
  prob.v = vec({0.5, 0});
  prob.constraints.push_back(NormBall{vec({1, 0}), Matrix::Identity(2, 2), 0.2, NormIndex::Two, 0, 0});
  prob.constraints.push_back(NormBall{vec({0, 1}), Matrix::Identity(2, 2), 0.2, NormIndex::Two, 0, 0});
  const ValidatedProblem p = validate_problem(prob);
  const EfficiencyVerdict v = certify_weak_efficiency(p, vec({0, 0}));
  ASSERT_TRUE(std::holds_alternative<Certified>(v));
  const auto& cert = std::get<Certified>(v).certificate;
  EXPECT_TRUE(verify_certificate(p, vec({0, 0}), cert, 1e-7).valid);
  EfficiencyCertificate bent = cert;
  for (RowMultiplier& m : bent.nominal.multipliers) {
    if (m.witness) *m.witness = vec({5, 0});
  }
  const VerificationReport r = verify_certificate(p, vec({0, 0}), bent, 1e-7);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.first_failure, "witness_norms");
}

}  // namespace
}  // namespace rmolp
