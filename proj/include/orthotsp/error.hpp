#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthotsp {

enum class ErrorCode {
  MalformedInput,
  UnsupportedFormat,
  AsymmetricInput,
  DimensionMismatch,
  TooLarge,
  TooSmall,
  InvalidParameter,
  NumericalFailure,
  NonConvergence,
  StepTooLarge,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// C API can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace orthotsp
