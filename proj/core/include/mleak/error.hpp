#pragma once

#include <stdexcept>
#include <string>

namespace mleak {

enum class ErrorKind {
  NegativeProbability,
  NotNormalized,
  DuplicateLabel,
  EmptyAlphabet,
  LabelMismatch,
  AllMassOutOfSupport,
  SizeCapExceeded,
  InvalidParameter,
  ParameterOutOfRange,
  DeltaOutOfRange,
  KTooLarge,
  EmptySample,
  ZeroGain,
  DegenerateMinSum,
  Infeasible,
  InfeasibleRate,
  UnstableQueue,
  MaxIterExceeded,
  SolverStalled,
  CoverageFailure,
};

// Coarse grouping used by the CLI exit-code map.
enum class ErrorCategory { Validation, Domain, Solver };

const char* kind_name(ErrorKind k);
ErrorCategory category_of(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace mleak
