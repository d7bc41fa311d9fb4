#include "osclab/error.hpp"

namespace osclab {

const char* error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DifferentiationFailure: return "DifferentiationFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::MultiplicityTooHigh: return "MultiplicityTooHigh";
    case ErrorKind::ReductionFailed: return "ReductionFailed";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InsufficientRange: return "InsufficientRange";
    case ErrorKind::NonPositiveMagnitude: return "NonPositiveMagnitude";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

}  // namespace osclab
