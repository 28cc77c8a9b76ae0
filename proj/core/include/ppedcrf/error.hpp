#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppedcrf {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  io,
  format,
  empty_input,
  not_found,
  unreachable,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is
/// stable and is what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace ppedcrf
