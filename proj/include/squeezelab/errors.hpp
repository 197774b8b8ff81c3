// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace squeezelab {

/// Failure categories surfaced by the library. The CLI reports these by name.
enum class ErrorCode {
  InvalidDimension,
  DimensionMismatch,
  NotHermitian,
  InvalidParameter,
  Regime,
  EmptyResult,
  Truncation,
  UnusableProbe,
  DegenerateProbe,
  OutOfRange,
  Periodicity,
  ZeroDenominator,
  Infeasible,
  Parse,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NotHermitian: return "not-hermitian";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Regime: return "regime";
    case ErrorCode::EmptyResult: return "empty-result";
    case ErrorCode::Truncation: return "untrusted-truncation";
    case ErrorCode::UnusableProbe: return "unusable-probe";
    case ErrorCode::DegenerateProbe: return "degenerate-probe";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::Periodicity: return "periodicity";
    case ErrorCode::ZeroDenominator: return "zero-denominator";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a Fock-space state puts too much weight near the cutoff.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& message, double tail_weight, int suggested_dim)
      : Error(ErrorCode::Truncation, message),
        tail_weight_(tail_weight),
        suggested_dim_(suggested_dim) {}

  double tail_weight() const noexcept { return tail_weight_; }
  int suggested_dim() const noexcept { return suggested_dim_; }

 private:
  double tail_weight_;
  int suggested_dim_;
};

}  // namespace squeezelab
