#include "ricci/error.hpp"

namespace ricci {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidChain: return "InvalidChain";
    case ErrorCode::kNonUniqueStationary: return "NonUniqueStationary";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kNotGeodesic: return "NotGeodesic";
    case ErrorCode::kNonPositiveKappa: return "NonPositiveKappa";
    case ErrorCode::kNoPositiveKappa: return "NoPositiveKappa";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kIncompletePairSet: return "IncompletePairSet";
    case ErrorCode::kInvalidV: return "InvalidV";
    case ErrorCode::kInvalidS: return "InvalidS";
    case ErrorCode::kZeroGranularity: return "ZeroGranularity";
    case ErrorCode::kNotReversible: return "NotReversible";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace ricci
