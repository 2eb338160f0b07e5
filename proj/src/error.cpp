#include "mrsearch/error.hpp"

namespace mrsearch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveConfidence: return "NonPositiveConfidence";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DegenerateZone: return "DegenerateZone";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace mrsearch
