#include "mchit/error.hpp"

namespace mchit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::BadRowSum: return "BadRowSum";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::BadTime: return "BadTime";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::WrongMode: return "WrongMode";
    case ErrorKind::EmptyTargetSet: return "EmptyTargetSet";
    case ErrorKind::TooLargeForExact: return "TooLargeForExact";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::BadDelta: return "BadDelta";
    case ErrorKind::ConstructionFailure: return "ConstructionFailure";
    case ErrorKind::ChainMismatch: return "ChainMismatch";
    case ErrorKind::NotReversible: return "NotReversible";
    case ErrorKind::NotMixing: return "NotMixing";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::BadSizes: return "BadSizes";
    case ErrorKind::BadHorizon: return "BadHorizon";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace mchit
