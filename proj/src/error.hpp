#pragma once

#include <stdexcept>
#include <string>

namespace c2f {

enum class ErrorCode {
  InvalidInput,
  OutOfBounds,
  Format,
  Tracker,
  Io,
  Backend,
  State,
};

// Single exception type for the engine; the code decides how callers
// (the C API, the CLI) classify the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidInput, what);
}

}  // namespace c2f
