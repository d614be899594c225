#include "kdaco/error.hpp"

namespace kdaco {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveTemperature: return "NonPositiveTemperature";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidShape: return "InvalidShape";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::EmptySplit: return "EmptySplit";
    case Errc::UnknownNoiseKind: return "UnknownNoiseKind";
    case Errc::LevelOutOfRange: return "LevelOutOfRange";
    case Errc::InvalidPolicyParameters: return "InvalidPolicyParameters";
    case Errc::AllZeroWeights: return "AllZeroWeights";
    case Errc::InvalidRho: return "InvalidRho";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::EmptyRun: return "EmptyRun";
    case Errc::InsufficientEvaluated: return "InsufficientEvaluated";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::ParseError: return "ParseError";
    case Errc::ConfigParseError: return "ConfigParseError";
    case Errc::IoError: return "IoError";
    case Errc::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

}  // namespace kdaco
