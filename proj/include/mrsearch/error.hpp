#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrsearch {

enum class ErrorCode {
  NonPositiveConfidence,
  NumericalFailure,
  DegenerateZone,
  OutOfBounds,
  NoCandidates,
  InvalidCell,
  NonPositiveHorizon,
  OutOfHorizon,
  Unreachable,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `name()` is the stable error name
/// used in logs, CLI diagnostics and trial abort causes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace mrsearch
