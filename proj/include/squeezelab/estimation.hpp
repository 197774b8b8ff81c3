// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * The estimation protocol: a phase phi is written onto the probe by
 * U = exp(i H phi), the observable A is measured projectively, and phi is
 * recovered by inverting the response curve <A>(phi) at the sample mean.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "squeezelab/hilbert.hpp"
#include "squeezelab/spectral.hpp"

namespace squeezelab {

/// exp(i H phi) |state>
StateVector evolve(const StateVector& state, const Operator& H, double phi);

struct DerivativeCheck {
  /// Re(-i <[H, A]>) on the evolved state.
  double analytic = 0.0;
  double analytic_imag = 0.0;
  /// Centered finite difference of <A>.
  double numeric = 0.0;
};

DerivativeCheck derivative_identity_check(const StateVector& state, const Operator& A, const Operator& H,
                                          double phi, double step);

/// dA / |<[A, H]>|. Throws UnusableProbe when the signal |<[A,H]>| vanishes.
double analytic_delta_phi(const StateVector& state, const Operator& A, const Operator& H);

/// Counter-based seed derivation so per-trial streams are independent of
/// evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Born-rule distribution of a Hermitian observable.
class MeasurementModel {
 public:
  explicit MeasurementModel(const Operator& A);

  const Operator& observable() const noexcept { return A_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eig_.values; }
  /// |<a_k|psi>|^2 for each eigenvector a_k.
  std::vector<double> probabilities(const StateVector& state) const;

 private:
  Operator A_;
  HermitianEigensystem eig_;
};

/// Inverse-CDF sampler over a discrete outcome set.
class OutcomeSampler {
 public:
  OutcomeSampler(const Eigen::VectorXd& values, const std::vector<double>& probabilities);

  double draw(std::mt19937_64& rng) const;
  std::vector<double> draw(std::mt19937_64& rng, int shots) const;
  double sample_mean(std::mt19937_64& rng, int shots) const;

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// Draws of the eigenvalues of A with Born probabilities. Deterministic for a fixed seed.
std::vector<double> sample_outcomes(const StateVector& state, const Operator& A, int shots, std::uint64_t seed);

struct CurveOptions {
  double half_width = std::numbers::pi / 2.0;
  int points = 2001;
};

class ResponseModel;

/// <A>(phi) on a grid centered on a working point, plus the window around
/// the working point on which it is strictly monotone.
struct ResponseCurve {
  std::vector<double> phi_grid;
  std::vector<double> mean_A;
  /// -i <[H, A]> along the grid.
  std::vector<double> derivative;
  double working_point = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int window_lo_index = 0;
  int window_hi_index = 0;

  std::shared_ptr<const ResponseModel> model;

  /// Exact <A>(phi), not interpolated.
  double evaluate(double phi) const;
};

ResponseCurve response_curve(const StateVector& probe, const Operator& A, const Operator& H, double working_point,
                             const CurveOptions& options = {});

/// Method-of-moments inversion of the response curve at the sample mean.
double estimate_phi(std::span<const double> outcomes, const ResponseCurve& curve);
double estimate_phi_from_mean(double sample_mean, const ResponseCurve& curve);

/// Working point near `preferred` whose slope is within 5% of the largest
/// slope on the surrounding window.
double choose_working_point(const StateVector& probe, const Operator& A, const Operator& H, double preferred = 0.0,
                            const CurveOptions& options = {});

struct EstimationOptions {
  CurveOptions curve;
  /// Runs are rejected unless the analytic rmse is below this.
  double periodicity_limit = 2.0 * std::numbers::pi / 20.0;
};

struct EstimationRun {
  double phi_true = 0.0;
  int shots = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;
  double empirical_rmse = 0.0;
  double analytic_rmse = 0.0;
  double analytic_delta_phi = 0.0;
  double bias = 0.0;
  int rejected_trials = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

EstimationRun run_estimation(const StateVector& probe, const Operator& A, const Operator& H, double phi_true,
                             int shots, int trials, std::uint64_t seed, const EstimationOptions& options = {});

}  // namespace squeezelab
