#include "revwalk/errors.hpp"

namespace revwalk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotErgodic: return "NotErgodic";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::NotMixedWithin: return "NotMixedWithin";
    case ErrorCode::CriterionNotMet: return "CriterionNotMet";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::NotEvenParity: return "NotEvenParity";
    case ErrorCode::NormTooLarge: return "NormTooLarge";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotSymmetricEncoding: return "NotSymmetricEncoding";
    case ErrorCode::ScalingViolation: return "ScalingViolation";
    case ErrorCode::GapClosed: return "GapClosed";
    case ErrorCode::NotIrreducibleBlock: return "NotIrreducibleBlock";
    case ErrorCode::Extinct: return "Extinct";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace revwalk
