#include "phaseint/error.hpp"

namespace phaseint {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::PoleHit: return "PoleHit";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::MaxRefinement: return "MaxRefinement";
    case Errc::NonFinite: return "NonFinite";
    case Errc::BranchAmbiguity: return "BranchAmbiguity";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::ValidityViolation: return "ValidityViolation";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnresolvedPhase: return "UnresolvedPhase";
    case Errc::MixedHandedness: return "MixedHandedness";
    case Errc::TraceStall: return "TraceStall";
    case Errc::AmbiguousDominance: return "AmbiguousDominance";
    case Errc::IOFailure: return "IOFailure";
    case Errc::StiffnessFailure: return "StiffnessFailure";
    case Errc::WrongForm: return "WrongForm";
    case Errc::UnsupportedAction: return "UnsupportedAction";
    case Errc::PathClash: return "PathClash";
    case Errc::HomotopyAmbiguous: return "HomotopyAmbiguous";
    case Errc::HandednessMismatch: return "HandednessMismatch";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::PoleOfGamma: return "PoleOfGamma";
    case Errc::BranchSeam: return "BranchSeam";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace phaseint
