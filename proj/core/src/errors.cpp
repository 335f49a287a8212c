#include "unitarizer/errors.hpp"

namespace unitarizer {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::SingularTransform: return "SingularTransform";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NumericalEscape: return "NumericalEscape";
    case ErrorKind::InvalidGroupoid: return "InvalidGroupoid";
    case ErrorKind::InvalidAction: return "InvalidAction";
    case ErrorKind::EmptyRestriction: return "EmptyRestriction";
    case ErrorKind::ZeroMassRestriction: return "ZeroMassRestriction";
    case ErrorKind::UnknownUnit: return "UnknownUnit";
    case ErrorKind::InvalidRepresentation: return "InvalidRepresentation";
    case ErrorKind::MissingArrow: return "MissingArrow";
    case ErrorKind::NotUniformlyBounded: return "NotUniformlyBounded";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::InvalidBaseRep: return "InvalidBaseRep";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace unitarizer
