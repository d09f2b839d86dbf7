#include "weyldens/error.hpp"

namespace weyldens {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidDecayHint: return "InvalidDecayHint";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::RegionError: return "RegionError";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
  }
  return "Unknown";
}

}  // namespace weyldens
