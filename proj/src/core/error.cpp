#include "core/error.hpp"

namespace flevy {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::InsufficientCoverage: return "insufficient-coverage";
    case ErrorCode::PreconditionViolation: return "precondition-violation";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Io: return "io-error";
    case ErrorCode::Internal: return "internal-error";
  }
  return "unknown";
}

}  // namespace flevy
