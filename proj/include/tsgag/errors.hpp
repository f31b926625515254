#pragma once

#include <stdexcept>
#include <string>

namespace tsgag {

enum class ErrorCode {
  EmptySpec,
  DegenerateInterval,
  NonpositiveAtomWeight,
  OverlappingComponents,
  SingularEvaluation,
  NonconvergedQuadrature,
  DivergentSeminorm,
  FewerThanTwoWeights,
  MethodUnavailable,
  InvalidSampleCount,
  BetaOutOfRange,
  X0NotInT,
  MeshTooCoarse,
  SingularMass,
  NoNonzeroEigenvalue,
  SingularSystem,
  TAtOrBelowA,
  ParseError,
  DomainError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type; `code()` identifies the failure class so
/// callers (notably the CLI) can map errors to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tsgag
