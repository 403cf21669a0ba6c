#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lakes {

enum class ErrorCode {
  NonHermitian,
  DimensionTooLarge,
  NoConvergence,
  NormDrift,
  BasisMismatch,
  DegenerateSpectrum,
  IndexOutOfRange,
  ZeroProjection,
  BadFactor,
  TooLarge,
  GroupActionInvalid,
  NoCoverings,
  TooDeep,
  EmptyLibrary,
  BurnInUnstable,
  InvalidArgument,
  ConfigInvalid,
  ResourceExceeded,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lakes
