#pragma once

#include <stdexcept>
#include <string>

namespace perc {

enum class ErrorCode {
  kInvalidSite,
  kUnsupportedFamily,
  kSiteOutsideSlab,
  kIncompatibleSizes,
  kBoundaryShapeMismatch,
  kInvalidSymbol,
  kLengthMismatch,
  kDomain,
  kWordTooLong,
  kNotAQuestion,
  kGraphTooLarge,
  kRingTooSmall,
  kInvalidConfig,
  kIo,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSite: return "invalid-site";
    case ErrorCode::kUnsupportedFamily: return "unsupported-family";
    case ErrorCode::kSiteOutsideSlab: return "site-outside-slab";
    case ErrorCode::kIncompatibleSizes: return "incompatible-sizes";
    case ErrorCode::kBoundaryShapeMismatch: return "boundary-shape-mismatch";
    case ErrorCode::kInvalidSymbol: return "invalid-symbol";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kDomain: return "domain-error";
    case ErrorCode::kWordTooLong: return "word-too-long";
    case ErrorCode::kNotAQuestion: return "not-a-?";
    case ErrorCode::kGraphTooLarge: return "graph-too-large";
    case ErrorCode::kRingTooSmall: return "ring too small";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace perc
