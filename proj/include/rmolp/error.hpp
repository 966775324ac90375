#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rmolp {

enum class ErrorCode {
  NegativeU,
  DimensionMismatch,
  SingularZ,
  EmptyVertexList,
  BadInterval,
  BoxTooLarge,
  NumericalBreakdown,
  NominalInfeasible,
  NonCertified,
  NotFeasiblePoint,
  SlaterViolated,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Failure raised by any analysis. Carries the index of the offending
/// constraint when one can be named.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> constraint = std::nullopt)
      : std::runtime_error(message), code_(code), constraint_(constraint) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> constraint() const noexcept { return constraint_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> constraint_;
};

}  // namespace rmolp
