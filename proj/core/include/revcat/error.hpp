#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace revcat {

enum class ErrorCode {
  // choice-core
  MissingMenu,
  BadSum,
  OutOfRange,
  ForeignItem,
  MalformedMenu,
  EmptyRestriction,
  BadUniverse,
  ParseError,
  // axiom-engine
  NotPositive,
  // categorizer
  SizeBound,
  InvalidPartition,
  ComponentNotPositive,
  // population-lab
  Condition1Violated,
  NotRepresentable,
  Degenerate,
  // rum-checker / model-zoo
  InvalidWitness,
  ZeroNestMass,
  BadParameter,
  NonRationalPower,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a typed code. Refutations and failed checks are not
/// errors; they are returned as values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace revcat
