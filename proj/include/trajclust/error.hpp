#pragma once

#include <stdexcept>
#include <string>

namespace trajclust {

// Numeric values match the CLI exit codes.
enum class ErrorCode : int {
  kUsage = 2,
  kIo = 3,
  kInvalidInput = 4,
  kNumeric = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw_error(code, message);
}

}  // namespace trajclust
