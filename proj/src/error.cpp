#include "cyclotrace/error.hpp"

namespace cyclotrace {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kBadLength: return "BadLength";
    case ErrorCode::kPadNotUnique: return "PadNotUnique";
    case ErrorCode::kDegenerateWeight: return "DegenerateWeight";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyTraceStream: return "EmptyTraceStream";
    case ErrorCode::kNoCondorcetWinner: return "NoCondorcetWinner";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kBadFactors: return "BadFactors";
    case ErrorCode::kPatternTooLong: return "PatternTooLong";
    case ErrorCode::kBadTarget: return "BadTarget";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kNotRegular: return "NotRegular";
    case ErrorCode::kInsufficientTraces: return "InsufficientTraces";
    case ErrorCode::kZeroLikelihoodBoth: return "ZeroLikelihoodBoth";
    case ErrorCode::kBadArgs: return "BadArgs";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace cyclotrace
