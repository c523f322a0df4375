#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidChain,
  kNonUniqueStationary,
  kZeroMass,
  kNotGeodesic,
  kNonPositiveKappa,
  kNoPositiveKappa,
  kUnbounded,
  kTooLarge,
  kIncompletePairSet,
  kInvalidV,
  kInvalidS,
  kZeroGranularity,
  kNotReversible,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ricci
