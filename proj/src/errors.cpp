#include "fatoulab/errors.hpp"

namespace fatoulab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::OutsideDisk: return "OutsideDisk";
    case ErrorKind::BasePointOnBoundary: return "BasePointOnBoundary";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OriginNotFixed: return "OriginNotFixed";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::SingularityHit: return "SingularityHit";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::TooCloseToSingularity: return "TooCloseToSingularity";
    case ErrorKind::SingularityApproach: return "SingularityApproach";
    case ErrorKind::StallRateExceeded: return "StallRateExceeded";
    case ErrorKind::LoopNotInBasin: return "LoopNotInBasin";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_validation(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::NoSignChange:
    case ErrorKind::OutsideDisk:
    case ErrorKind::BasePointOnBoundary:
    case ErrorKind::DomainMismatch:
    case ErrorKind::EmptyInput:
    case ErrorKind::OriginNotFixed:
    case ErrorKind::Unsupported:
      return true;
    default:
      return false;
  }
}

}  // namespace fatoulab
