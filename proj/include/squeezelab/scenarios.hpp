// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * End-to-end scenarios: position, Susskind-Glogower phase, quadrature phase
 * and spin rotation estimation, plus the generic protocol designer. Each run
 * yields the gain report, Monte-Carlo cross-checks and validity notes.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "squeezelab/estimation.hpp"
#include "squeezelab/intelligent.hpp"
#include "squeezelab/resources.hpp"
#include "squeezelab/stats.hpp"

namespace squeezelab {

enum class Family { Position, SGPhase, QuadraturePhase, SpinRotation, Custom };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

/// Largest Fock truncation tried by automatic dimension selection.
inline constexpr int kMaxAutoDim = 16384;
/// Largest dimension for which observables are diagonalized for sampling.
inline constexpr int kMonteCarloDimLimit = 1024;

struct ScenarioConfig {
  Family family = Family::Position;

  // Position
  double lambda = 9.0;
  // SGPhase
  double alpha_mag = 4.0;
  /// Phase of the coherent state used for the dC/<S> versus dS/<C> comparison.
  double identity_phase = 0.7853981633974483;
  // QuadraturePhase; alpha_sq defaults to the balanced e^xi / sqrt(2)
  double xi = 2.0;
  std::optional<double> alpha_sq;
  double alpha_cl = 1.0;
  // SpinRotation
  int two_j = 16;
  // Custom
  std::string a_path;
  std::string h_path;
  double energy_budget = 0.0;
  std::vector<double> lambda_grid;
  GroundConvention ground = GroundConvention::Spectrum;

  /// Fixed truncation. When empty the dimension is chosen automatically.
  std::optional<int> dim;
  /// Starting point for automatic selection.
  int default_dim = kDefaultFockDim;

  std::uint64_t seed = 1;
  int shots = 10000;
  int trials = 200;
  bool monte_carlo = true;
  BoundConstants constants;

  /// Throws InvalidParameter on out-of-domain values.
  void validate() const;
};

struct ScenarioResult {
  Family family = Family::Position;
  std::string param_name;
  double param = 0.0;
  int dim = 0;
  std::optional<GainReport> gain;
  std::optional<EstimationRun> sq_run;
  std::optional<EstimationRun> cl_run;
  /// Validity flags, e.g. "rule=EnergyRatio" or "mc_skipped_sq=dim".
  std::vector<std::string> notes;
  /// Named scalar outputs (analytic dphi values, slacks, tail weights).
  std::map<std::string, double> metrics;

  double metric(const std::string& key) const;
  bool has_note(const std::string& prefix) const;
};

ScenarioResult run_position(double lambda, const ScenarioConfig& config);
ScenarioResult run_sg_phase(double alpha_mag, const ScenarioConfig& config);
ScenarioResult run_quadrature_phase(double xi, std::optional<double> alpha_sq, const ScenarioConfig& config);
ScenarioResult run_spin(int two_j, const ScenarioConfig& config);

struct DesignOptions {
  GroundConvention ground = GroundConvention::Spectrum;
  double accept_tol = 1e-8;
  std::uint64_t seed = 1;
  int shots = 10000;
  int trials = 200;
  bool monte_carlo = true;
};

/// Default lambda grid for the designer: 2^{k/4}, k = 0..32.
std::vector<double> default_design_grid();

/// Solves L(lambda) over the grid, keeps Good states whose energy above ground
/// fits the budget, and picks the one closest to the budget. Throws
/// Infeasible when nothing qualifies.
ScenarioResult design_protocol(const Operator& A, const Operator& H, double energy_budget,
                               const BoundConstants& constants, const std::vector<double>& lambda_grid,
                               const DesignOptions& options = {});

/// Dispatches on config.family.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct SweepResult {
  Family family = Family::Position;
  std::vector<ScenarioResult> points;
  /// Log-log fit: ratio versus N, or squeezed dphi versus j for spin.
  std::optional<LineFit> fit;
  std::string fit_label;
};

/// One scenario per parameter value with seeds derived from (config.seed, index).
/// Results keep parameter order whatever `jobs` is.
SweepResult run_sweep(const ScenarioConfig& config, const std::vector<double>& params, int jobs = 1);

}  // namespace squeezelab
