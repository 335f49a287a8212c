#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unitarizer {

enum class ErrorKind {
  // linear algebra
  NonConvergence,
  NotHermitian,
  NotPositiveDefinite,
  DimensionMismatch,
  // geometry
  ParameterOutOfRange,
  SingularTransform,
  // circumcenter
  EmptySet,
  NumericalEscape,
  // groupoids
  InvalidGroupoid,
  InvalidAction,
  EmptyRestriction,
  ZeroMassRestriction,
  UnknownUnit,
  // representations
  InvalidRepresentation,
  MissingArrow,
  NotUniformlyBounded,
  SolverFailure,
  InvalidBaseRep,
  // io
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so that callers
/// (notably the command line tool) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace unitarizer
