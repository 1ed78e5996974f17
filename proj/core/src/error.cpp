#include "ceeds/error.hpp"

namespace ceeds {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kInsufficientOccurrences: return "insufficient occurrences";
    case ErrorCode::kPeriodTooShort: return "period too short";
    case ErrorCode::kNoCandidate: return "no candidate";
    case ErrorCode::kDegenerateFit: return "degenerate fit";
    case ErrorCode::kNonInvertible: return "non-invertible";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kUndefinedMetric: return "undefined metric";
  }
  return "unknown";
}

}  // namespace ceeds
