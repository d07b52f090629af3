#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

enum class ErrorKind {
  AssumptionViolation,
  ShapeViolation,
  DegenerateSurface,
  SliceThroughSingularity,
  SingularTime,
  NullSpaceViolation,
  ResonanceMismatch,
  BlowupInReducedSystem,
  StepCollapse,
  OutOfRange,
  TrajectoryTooShort,
  BlowupReachedBoundary,
  CFLViolation,
  ImmediateOverflow,
  FitFailure,
  InvalidConfig,
  Unsupported,
  Io,
};

// Exit-code category of an error kind: 1 = validation, 2 = numerical.
enum class ErrorCategory { Validation = 1, Numerical = 2 };

const char* to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::AssumptionViolation: return "AssumptionViolation";
    case ErrorKind::ShapeViolation: return "ShapeViolation";
    case ErrorKind::DegenerateSurface: return "DegenerateSurface";
    case ErrorKind::SliceThroughSingularity: return "SliceThroughSingularity";
    case ErrorKind::SingularTime: return "SingularTime";
    case ErrorKind::NullSpaceViolation: return "NullSpaceViolation";
    case ErrorKind::ResonanceMismatch: return "ResonanceMismatch";
    case ErrorKind::BlowupInReducedSystem: return "BlowupInReducedSystem";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::TrajectoryTooShort: return "TrajectoryTooShort";
    case ErrorKind::BlowupReachedBoundary: return "BlowupReachedBoundary";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::ImmediateOverflow: return "ImmediateOverflow";
    case ErrorKind::FitFailure: return "FitFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

inline ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::AssumptionViolation:
    case ErrorKind::ShapeViolation:
    case ErrorKind::DegenerateSurface:
    case ErrorKind::SliceThroughSingularity:
    case ErrorKind::NullSpaceViolation:
    case ErrorKind::TrajectoryTooShort:
    case ErrorKind::BlowupReachedBoundary:
    case ErrorKind::InvalidConfig:
    case ErrorKind::Unsupported:
    case ErrorKind::Io:
      return ErrorCategory::Validation;
    default:
      return ErrorCategory::Numerical;
  }
}

}  // namespace blowup
