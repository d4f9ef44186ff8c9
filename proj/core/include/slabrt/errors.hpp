#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slabrt {

enum class ErrorCode {
  InvalidInput,
  NonPositiveDensity,
  GridTooSmall,
  LengthMismatch,
  ZeroFrequency,
  EigensolveFailure,
  ConvergenceFailure,
  NoRTPoint,
  EmptyBand,
  NonPositiveHorizon,
  SingularStep,
  InsufficientGrowth,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// front-ends can map it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace slabrt
