#include "zetashift/core.hpp"

namespace zetashift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::PoleAt1: return "PoleAt1";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::DivisionNearZero: return "DivisionNearZero";
    case ErrorCode::BranchCutFailure: return "BranchCutFailure";
    case ErrorCode::FitBoundNotMet: return "FitBoundNotMet";
    case ErrorCode::NoPositiveDelta: return "NoPositiveDelta";
    case ErrorCode::MarginTooSmall: return "MarginTooSmall";
    case ErrorCode::OverlapDetected: return "OverlapDetected";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::KroneckerNotFound: return "KroneckerNotFound";
    case ErrorCode::IndependenceViolated: return "IndependenceViolated";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace zetashift
