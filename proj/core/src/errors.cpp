#include "qsmooth/errors.hpp"

namespace qsmooth {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ConstructionFailure: return "ConstructionFailure";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TooManyClasses: return "TooManyClasses";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::ParameterOrder: return "ParameterOrder";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NoFeasibleGamma: return "NoFeasibleGamma";
    case ErrorCode::BadSpec: return "BadSpec";
  }
  return "UnknownError";
}

}  // namespace qsmooth
