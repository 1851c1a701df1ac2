#include "hcs/error.hpp"

namespace hcs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kInvalidSignal: return "invalid-signal";
    case ErrorCode::kInvalidMeasurement: return "invalid-measurement";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kNumericFailure: return "numeric-failure";
    case ErrorCode::kDomainError: return "domain-error";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kMismatchedQuantizer: return "mismatched-quantizer";
    case ErrorCode::kZeroVector: return "zero-vector";
    case ErrorCode::kInvalidCandidate: return "invalid-candidate";
    case ErrorCode::kDegeneratePosition: return "degenerate-position";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kSpecInvalid: return "spec-invalid";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kIoError: return "io-error";
  }
  return "unknown";
}

}  // namespace hcs
