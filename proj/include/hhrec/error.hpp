#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhrec {

enum class ErrorKind {
  VariableMismatch,
  DivisionByZero,
  NotExact,
  ZeroAtNegativeExponent,
  NonSquare,
  IndexOutOfWindow,
  InvalidSpec,
  LaurentViolation,
  SymbolicRangeExceeded,
  ZeroInitialValue,
  DegenerateDenominator,
  SingularDelta,
  ZeroAlpha,
  SingularSystem,
  DegenerateT,
  ResampleBudgetExhausted,
  InsufficientData,
  NonInteger,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::VariableMismatch: return "VariableMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotExact: return "NotExact";
    case ErrorKind::ZeroAtNegativeExponent: return "ZeroAtNegativeExponent";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::IndexOutOfWindow: return "IndexOutOfWindow";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::LaurentViolation: return "LaurentViolation";
    case ErrorKind::SymbolicRangeExceeded: return "SymbolicRangeExceeded";
    case ErrorKind::ZeroInitialValue: return "ZeroInitialValue";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::SingularDelta: return "SingularDelta";
    case ErrorKind::ZeroAlpha: return "ZeroAlpha";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateT: return "DegenerateT";
    case ErrorKind::ResampleBudgetExhausted: return "ResampleBudgetExhausted";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NonInteger: return "NonInteger";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Degenerate data for specific numeric seeds: zero pivots, vanishing
/// determinants, poles. The verifier resamples on these; the CLI maps them
/// to exit code 3.
constexpr bool is_degeneracy(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero:
    case ErrorKind::ZeroInitialValue:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::SingularDelta:
    case ErrorKind::ZeroAlpha:
    case ErrorKind::SingularSystem:
    case ErrorKind::DegenerateT:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::int64_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Sequence index or variable position the error refers to, when there is one.
  std::optional<std::int64_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::int64_t> index_;
};

}  // namespace hhrec
