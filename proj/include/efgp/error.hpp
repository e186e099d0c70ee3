#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace efgp {

enum class ErrorKind {
  UnknownFamily,
  EmptyTable,
  EmptyRange,
  PhaseOutOfRange,
  InvalidArgument,
  Overflow,
  DegenerateSolution,
  LengthMismatch,
  TolTooSmall,
  NoConvergence,
  ParamOutOfRange,
  SubcriticalAmplitude,
  ZeroInitial,
  NegativeConstant,
  ResonantFrequency,
  DegenerateFrequencies,
  RangeMismatch,
  PreconditionFailed,
  NotUnitVectors,
  DomainError,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the toolkit surfaces as an Error carrying its kind, so
// callers (and the CLI exit-status logic) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace efgp
