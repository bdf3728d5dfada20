#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ift {

/// Failure categories. The CLI maps each one to a distinct exit status.
enum class ErrorCode {
  kInvalidArgument = 10,
  kInvalidTree = 11,
  kPrecondition = 12,
  kZeroProbability = 13,
  kCapExceeded = 14,
  kFormat = 15,
  kIo = 16,
  kScanViolation = 17,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ift
