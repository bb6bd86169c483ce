#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phaseint {

/// Failure categories reported by the toolkit. Every thrown `Error` carries one.
enum class Errc {
  InvalidInput,
  PoleHit,
  DegenerateInput,
  MaxRefinement,
  NonFinite,
  BranchAmbiguity,
  SingularPoint,
  ValidityViolation,
  DimensionMismatch,
  UnresolvedPhase,
  MixedHandedness,
  TraceStall,
  AmbiguousDominance,
  IOFailure,
  StiffnessFailure,
  WrongForm,
  UnsupportedAction,
  PathClash,
  HomotopyAmbiguous,
  HandednessMismatch,
  NotApplicable,
  PoleOfGamma,
  BranchSeam,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace phaseint
