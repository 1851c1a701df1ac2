#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcs {

enum class ErrorCode {
  kInvalidDimension,
  kDimensionMismatch,
  kIndexOutOfRange,
  kInvalidSignal,
  kInvalidMeasurement,
  kInvalidConfig,
  kNumericFailure,
  kDomainError,
  kOutOfRange,
  kMismatchedQuantizer,
  kZeroVector,
  kInvalidCandidate,
  kDegeneratePosition,
  kLengthMismatch,
  kSpecInvalid,
  kParseError,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; code() lets callers
// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by inconsistent data shapes rather than bad
// parameters.
constexpr bool is_data_error(ErrorCode code) noexcept {
  return code == ErrorCode::kDimensionMismatch ||
         code == ErrorCode::kLengthMismatch ||
         code == ErrorCode::kMismatchedQuantizer;
}

}  // namespace hcs
