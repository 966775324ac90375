#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmolp {

/// Process exit codes of the `rmolp` tool.
enum ExitCode : int {
  kExitOk = 0,            // radius computed, Feasible, Certified, valid
  kExitNegative = 1,      // Infeasible, Refuted, invalid certificate
  kExitUndecided = 2,     // Inconclusive, Unknown, numerical breakdown
  kExitInput = 3,         // usage, parse or validation error
  kExitInfeasible = 4,    // NominalInfeasible, NotFeasiblePoint
  kExitPrecondition = 5,  // wrong constraint class, SlaterViolated, NegativeU
  kExitDisagreement = 6,  // certifier and oracle disagree
};

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmolp
