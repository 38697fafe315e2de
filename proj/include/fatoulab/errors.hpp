#pragma once

#include <stdexcept>
#include <string>

namespace fatoulab {

enum class ErrorKind {
  // input validation: caller supplied something outside a contract
  InvalidArgument,
  OutOfRange,
  NoSignChange,
  OutsideDisk,
  BasePointOnBoundary,
  DomainMismatch,
  EmptyInput,
  OriginNotFixed,
  Unsupported,
  // runtime: the computation itself could not produce a trustworthy value
  SingularityHit,
  Overflow,
  TooCloseToSingularity,
  SingularityApproach,
  StallRateExceeded,
  LoopNotInBasin,
  Io,
  Internal,
};

const char* to_string(ErrorKind kind);

/// True for the kinds that signal bad input rather than a failed computation.
bool is_validation(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by Blaschke evaluation near ±1. Carries the smallest distance to the
/// singularities at which the requested accuracy is still reachable.
class TooCloseToSingularity : public Error {
 public:
  TooCloseToSingularity(const std::string& message, double min_usable_radius)
      : Error(ErrorKind::TooCloseToSingularity, message),
        min_usable_radius_(min_usable_radius) {}

  double min_usable_radius() const { return min_usable_radius_; }

 private:
  double min_usable_radius_;
};

}  // namespace fatoulab
