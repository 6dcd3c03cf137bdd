#include "orthotsp/error.hpp"

namespace orthotsp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace orthotsp
