#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace povm {

enum class ErrorKind {
  NonHermitianInput,
  NotPositive,
  EffectExceedsIdentity,
  NotNormalized,
  ZeroEffect,
  DuplicateLabel,
  ShapeMismatch,
  WeightOutOfRange,
  NotProjective,
  BadPartition,
  SingularSum,
  NotState,
  NotCommutative,
  OrthogonalPair,
  TrivialPerturbation,
  InvalidPerturbation,
  ZeroEffectProduced,
  TheoremViolation,
  InvalidKernel,
  NotDeterministic,
  RetryExhausted,
  InvalidTolerances,
  MalformedInput,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::EffectExceedsIdentity: return "EffectExceedsIdentity";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ZeroEffect: return "ZeroEffect";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorKind::NotProjective: return "NotProjective";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::SingularSum: return "SingularSum";
    case ErrorKind::NotState: return "NotState";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::OrthogonalPair: return "OrthogonalPair";
    case ErrorKind::TrivialPerturbation: return "TrivialPerturbation";
    case ErrorKind::InvalidPerturbation: return "InvalidPerturbation";
    case ErrorKind::ZeroEffectProduced: return "ZeroEffectProduced";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
    case ErrorKind::InvalidKernel: return "InvalidKernel";
    case ErrorKind::NotDeterministic: return "NotDeterministic";
    case ErrorKind::RetryExhausted: return "RetryExhausted";
    case ErrorKind::InvalidTolerances: return "InvalidTolerances";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind alongside the message. `residual` holds the offending
/// norm when the failure is quantitative (normalization residual, commutator norm, ...), else 0.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double residual = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), residual_(residual) {}

  ErrorKind kind() const noexcept { return kind_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

}  // namespace povm
