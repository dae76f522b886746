#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tap {

enum class ErrorCode {
  EdgeEndpointMissing,
  SelfLoop,
  SpanOutOfBounds,
  UnknownRole,
  InvalidGraph,
  InconsistentFrame,
  MalformedInput,
  DistributionNotNormalized,
  BudgetExhaustedWithNoIncumbent,
  InstanceTooLarge,
  UnitMismatchWithinSeries,
  NoComparedRole,
  NoNumberFound,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// (and the CLI exit-code mapping) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tap
