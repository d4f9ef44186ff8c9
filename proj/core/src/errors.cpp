#include "slabrt/errors.hpp"

namespace slabrt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::EigensolveFailure: return "EigensolveFailure";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NoRTPoint: return "NoRTPoint";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::InsufficientGrowth: return "InsufficientGrowth";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace slabrt
