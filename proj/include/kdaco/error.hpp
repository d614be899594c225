#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdaco {

enum class Errc {
  NonPositiveTemperature,
  NonFiniteInput,
  LengthMismatch,
  InvalidDistribution,
  IndexOutOfRange,
  InvalidShape,
  ShapeMismatch,
  NonFiniteLoss,
  EmptySplit,
  UnknownNoiseKind,
  LevelOutOfRange,
  InvalidPolicyParameters,
  AllZeroWeights,
  InvalidRho,
  InvalidConfig,
  PoolTooSmall,
  EmptyRun,
  InsufficientEvaluated,
  EmptyMatrix,
  DegenerateLabels,
  ParseError,
  ConfigParseError,
  IoError,
  VerificationFailed,
};

std::string_view errc_name(Errc code) noexcept;

// Every library failure surfaces as this exception; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kdaco
