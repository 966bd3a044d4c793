#include "oinfo/error.hpp"

namespace oinfo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::SingularSubmatrix: return "SingularSubmatrix";
    case ErrorCode::PerfectCorrelation: return "PerfectCorrelation";
    case ErrorCode::SubsetTooSmall: return "SubsetTooSmall";
    case ErrorCode::SubsetTooLarge: return "SubsetTooLarge";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::ExactLimitExceeded: return "ExactLimitExceeded";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::IndexOverlap: return "IndexOverlap";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IrreparableMatrix: return "IrreparableMatrix";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InfeasibleStratum: return "InfeasibleStratum";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularSubmatrix:
    case ErrorCode::NonPositiveVariance:
    case ErrorCode::PerfectCorrelation:
    case ErrorCode::IrreparableMatrix:
      return ErrorCategory::Numerical;
    case ErrorCode::SubsetTooSmall:
    case ErrorCode::SubsetTooLarge:
    case ErrorCode::WrongArity:
    case ErrorCode::IndexOverlap:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InfeasibleStratum:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace oinfo
