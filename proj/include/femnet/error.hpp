#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace femnet {

enum class ErrorKind {
  DegenerateSimplex,
  NonConforming,
  SingularSystem,
  OutsideDomain,
  DimensionUnsupported,
  DuplicatePieces,
  AmbiguousActivePiece,
  UnboundedRegionUnsupported,
  PreconditionViolated,
  DimensionMismatch,
  PairwiseDependent,
  NotLocallyConvex,
  ClauseTooWide,
  NumericalDependenceAmbiguous,
  EmptyList,
  BoundViolated,
  ExpansionOverflow,
  IdentityCheckFailed,
  KnotOrderViolated,
  TargetUnreachable,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::NonConforming: return "NonConforming";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::DuplicatePieces: return "DuplicatePieces";
    case ErrorKind::AmbiguousActivePiece: return "AmbiguousActivePiece";
    case ErrorKind::UnboundedRegionUnsupported: return "UnboundedRegionUnsupported";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PairwiseDependent: return "PairwiseDependent";
    case ErrorKind::NotLocallyConvex: return "NotLocallyConvex";
    case ErrorKind::ClauseTooWide: return "ClauseTooWide";
    case ErrorKind::NumericalDependenceAmbiguous: return "NumericalDependenceAmbiguous";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::ExpansionOverflow: return "ExpansionOverflow";
    case ErrorKind::IdentityCheckFailed: return "IdentityCheckFailed";
    case ErrorKind::KnotOrderViolated: return "KnotOrderViolated";
    case ErrorKind::TargetUnreachable: return "TargetUnreachable";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace femnet
