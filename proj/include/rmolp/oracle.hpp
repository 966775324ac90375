#pragma once

// Independent checks: scenario grids over the objective segment, refutation
// by improving-point LPs, and replay of efficiency certificates.

#include "rmolp/efficiency.hpp"
#include "rmolp/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rmolp {

/// C_bar + (i / (k - 1)) u v' for i = 0, ..., k - 1. Requires k >= 2.
std::vector<Matrix> scenario_grid(const ValidatedProblem& problem, std::size_t k);

enum class OracleOutcome { Confirmed, Refuted, Inconclusive };

struct OracleChecks {
  std::size_t scenarios = 0;
  std::size_t linear_programs = 0;
};

struct OracleVerdict {
  OracleOutcome outcome = OracleOutcome::Inconclusive;
  std::optional<DominanceWitness> witness;
  OracleChecks checks;
};

/// Scans the grid in order; the first scenario with a replayed improving
/// point refutes. Confirmed only when X is all-linear and every scenario
/// passes. Does not require u >= 0.
OracleVerdict refute_robust_weak_efficiency(const ValidatedProblem& problem,
                                            const Vector& x_bar, std::size_t k);

struct CertificateCheck {
  std::string name;
  double residual = 0.0;
  bool passed = true;
};

struct VerificationReport {
  bool valid = true;
  std::string first_failure;  // empty when valid
  std::vector<CertificateCheck> checks;
};

/// Replays feasibility of x_bar, simplex membership of both weight vectors,
/// multiplier signs, witness norms, scenario membership in V_j, both
/// stationarity equalities and complementarity, each against `tol`.
VerificationReport verify_certificate(const ValidatedProblem& problem, const Vector& x_bar,
                                      const EfficiencyCertificate& certificate, double tol);

}  // namespace rmolp
