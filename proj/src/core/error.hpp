#pragma once

#include <stdexcept>
#include <string>

namespace flevy {

// Numeric values match flevy_status in the C header.
enum class ErrorCode : int {
  InvalidParameter = 1,
  Unsupported = 2,
  InsufficientCoverage = 3,
  PreconditionViolation = 4,
  Parse = 5,
  Io = 6,
  Internal = 7,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace flevy
