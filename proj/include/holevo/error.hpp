#pragma once

#include <stdexcept>
#include <string>

namespace holevo {

enum class ErrorCode {
  kInvalidOperand = 1,
  kDimensionMismatch,
  kInvalidArgument,
  kInfeasible,
  kDegenerateTransport,
  kUnsupported,
  kParse,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` one-to-one onto `hl_status`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace holevo
