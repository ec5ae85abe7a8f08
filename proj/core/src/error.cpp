#include "mantrap/error.hpp"

namespace mantrap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DiagonalChannel: return "DiagonalChannel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DuplicateChannel: return "DuplicateChannel";
    case ErrorCode::IncompleteFrame: return "IncompleteFrame";
    case ErrorCode::MalformedCycle: return "MalformedCycle";
    case ErrorCode::WindowViolation: return "WindowViolation";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonPositiveFactor: return "NonPositiveFactor";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::MissingCalibration: return "MissingCalibration";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Separation: return "Separation";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::DegenerateGroup: return "DegenerateGroup";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::UnfittedModel: return "UnfittedModel";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

bool is_fit_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RankDeficient:
    case ErrorCode::NonConvergence:
    case ErrorCode::Separation:
    case ErrorCode::SingleClass:
    case ErrorCode::ModelMismatch:
    case ErrorCode::DegenerateGroup:
    case ErrorCode::ZeroVariance:
    case ErrorCode::UnfittedModel:
      return true;
    default:
      return false;
  }
}

}  // namespace mantrap
