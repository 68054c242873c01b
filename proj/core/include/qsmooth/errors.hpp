#pragma once

#include <stdexcept>
#include <string>

namespace qsmooth {

enum class ErrorCode {
  DimensionMismatch,
  NotPositive,
  NotNormalized,
  NotHermitian,
  DecompositionFailure,
  LambdaOutOfRange,
  POutOfRange,
  EpsilonTooLarge,
  PreconditionViolated,
  ConstructionFailure,
  DimensionTooLarge,
  NonConvergence,
  TooManyClasses,
  RankOutOfRange,
  ParameterOrder,
  GridTooCoarse,
  NoFeasibleGamma,
  BadSpec,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qsmooth
