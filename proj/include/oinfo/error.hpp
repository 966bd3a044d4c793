#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oinfo {

enum class ErrorCode {
  NonPositiveVariance,
  SingularSubmatrix,
  PerfectCorrelation,
  SubsetTooSmall,
  SubsetTooLarge,
  WrongArity,
  ExactLimitExceeded,
  InvalidDistribution,
  IndexOverlap,
  IndexOutOfRange,
  InvalidMatrix,
  ParseError,
  EmptyInput,
  ZeroVariance,
  ShapeMismatch,
  IrreparableMatrix,
  UnknownNode,
  DuplicateNode,
  InvalidConfig,
  InfeasibleStratum,
  EmptyAfterFilter,
  LengthMismatch,
  DegenerateInput,
  LabelMismatch,
  IoError,
};

// Coarse grouping used by the CLI exit-code contract.
enum class ErrorCategory { Numerical, Usage, Data };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace oinfo
