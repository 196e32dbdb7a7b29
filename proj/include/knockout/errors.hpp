#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knockout {

enum class ErrorCode {
  InvalidCardinality,
  InvalidK,
  InvalidNode,
  InvalidValue,
  InvalidArgument,
  NotSaturated,
  NotCoherent,
  NotBinary,
  InconsistentStructure,
  StateSpaceTooLarge,
  NotConstantOnBlock,
  NonPositiveEntry,
  NotStochastic,
  EmptyDistribution,
  IndexMismatch,
  InvalidWitness,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an Error carrying
/// a machine-checkable code. Internal invariant violations use std::logic_error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCardinality: return "InvalidCardinality";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSaturated: return "NotSaturated";
    case ErrorCode::NotCoherent: return "NotCoherent";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::InconsistentStructure: return "InconsistentStructure";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::NotConstantOnBlock: return "NotConstantOnBlock";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace knockout
