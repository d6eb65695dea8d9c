#pragma once

#include <stdexcept>
#include <string>

namespace schmidt {

enum class ErrorCode {
  InvalidInput,
  WrongShape,
  NotHermitian,
  NotPositiveSemidefinite,
  TraceMismatch,
  Unsupported,
  Internal,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Everything except Internal is the caller's fault.
  bool is_input_error() const noexcept { return code_ != ErrorCode::Internal; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidInput, what);
}

}  // namespace schmidt
