#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mchit {

enum class ErrorKind {
  NonSquare,
  NegativeRate,
  BadRowSum,
  Reducible,
  BadDistribution,
  SolverFailure,
  NegativeTime,
  BadTime,
  LengthMismatch,
  WrongMode,
  EmptyTargetSet,
  TooLargeForExact,
  BadAlpha,
  BadDelta,
  ConstructionFailure,
  ChainMismatch,
  NotReversible,
  NotMixing,
  UnknownFamily,
  BadSize,
  BadSizes,
  BadHorizon,
  ParseError,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mchit
