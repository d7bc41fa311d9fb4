#pragma once

#include <stdexcept>
#include <string>

namespace osclab {

// Every domain failure carries one of these names verbatim so that callers
// (and the CLI) can report it without translation.
enum class ErrorKind {
  ParseError,
  DifferentiationFailure,
  IllConditioned,
  MultiplicityTooHigh,
  ReductionFailed,
  NoConvergence,
  SingularJacobian,
  BudgetExceeded,
  InsufficientRange,
  NonPositiveMagnitude,
  InvalidArgument,
};

const char* error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace osclab
