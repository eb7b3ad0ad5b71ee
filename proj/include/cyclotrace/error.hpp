#pragma once

#include <stdexcept>
#include <string>

namespace cyclotrace {

// Numeric values are part of the C ABI (see cyclotrace.h) and must not change.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInstanceTooLarge = 2,
  kBadLength = 3,
  kPadNotUnique = 4,
  kDegenerateWeight = 5,
  kLengthMismatch = 6,
  kEmptyTraceStream = 7,
  kNoCondorcetWinner = 8,
  kNotFound = 9,
  kBadFactors = 10,
  kPatternTooLong = 11,
  kBadTarget = 12,
  kIllConditioned = 13,
  kNotRegular = 14,
  kInsufficientTraces = 15,
  kZeroLikelihoodBoth = 16,
  kBadArgs = 17,
  kIo = 18,
  kInternal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

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

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace cyclotrace
