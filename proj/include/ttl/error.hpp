#pragma once

#include <stdexcept>
#include <string>

namespace ttl {

enum class ErrorKind {
  DimensionMismatch,
  NotSelfDual,
  BasePointInvalid,
  EvenResidueChar,
  LevelTooSmall,
  NonStabilizing,
  SingularFiber,
  NormalizationFailure,
  MetaplecticAmbiguity,
  NeedsRefinement,
  CosetEnumerationFailure,
  PoleAtS,
  ConfigError,
  InvalidArgument,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the level reached, for NonStabilizing.
class NonStabilizing : public Error {
 public:
  NonStabilizing(int cap, const std::string& what)
      : Error(ErrorKind::NonStabilizing, what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  int cap() const { return cap_; }

 private:
  int cap_;
};

}  // namespace ttl
