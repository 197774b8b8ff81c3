// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Energy accounting for estimation strategies: ground energy, strategy
 * classification against the quantum measurement bound, the number of
 * equivalent classical probes, and squeezed-versus-classical gain reports.
 */

#pragma once

#include <optional>
#include <string_view>

#include "squeezelab/hilbert.hpp"

namespace squeezelab {

/// Order-one constants of the measurement bound
///   dphi >= max[kappa / (nu (<H> - E0)), gamma / (sqrt(nu) dH)].
struct BoundConstants {
  double kappa = 1.0;
  double gamma = 1.0;
  /// A strategy is good when (<H> - E0) / (zeta dH) lies in [1/band, band].
  double band = 3.0;

  double zeta() const { return kappa / gamma; }
  /// Throws InvalidParameter on non-positive constants or band <= 1.
  void validate() const;
};

enum class Strategy { Good, TooMuchEnergy, TooLittleEnergy };

std::string_view to_string(Strategy s);

struct StrategyProfile {
  double mean_energy = 0.0;
  double ground_energy = 0.0;
  double sd_energy = 0.0;
  /// (<H> - E0) / (zeta dH)
  double good_ratio = 0.0;
  Strategy classification = Strategy::Good;

  double energy_above_ground() const { return mean_energy - ground_energy; }
};

/// How the ground energy of H is fixed.
enum class GroundConvention {
  /// Smallest eigenvalue of H.
  Spectrum,
  /// E0 = 0, for Hamiltonians such as P that are only bounded after an energy cutoff.
  ZeroOverride,
};

double ground_energy(const Operator& H, GroundConvention convention = GroundConvention::Spectrum);

Strategy classify_ratio(double good_ratio, const BoundConstants& constants);

/// Profile of a probe state under Hamiltonian H with a known ground energy.
StrategyProfile classify_strategy(const StateVector& state, const Operator& H, double ground,
                                  const BoundConstants& constants = {});

enum class ProbeCountRule {
  /// N = (<H>_sq - E0) / (<H>_cl - E0), for good classical strategies.
  EnergyRatio,
  /// N = (<H>_sq - E0) / dH_cl, counting only the classical energy that is used.
  EnergyOverClassicalSd,
  /// N = dH_sq / (<H>_cl - E0), for classical strategies with too little energy.
  SqueezedSdOverClassicalEnergy,
};

std::string_view to_string(ProbeCountRule rule);

struct ProbeCount {
  double n = 0.0;
  ProbeCountRule rule = ProbeCountRule::EnergyRatio;
};

ProbeCount probe_count(const StrategyProfile& sq, const StrategyProfile& cl);

double heisenberg_lower_bound(const StrategyProfile& profile, int nu, const BoundConstants& constants = {});

/// A probe together with the measured observable and the encoding Hamiltonian.
struct Probe {
  StateVector state;
  Operator A;
  Operator H;
};

/// Which comparison was used to predict the squeezed/classical ratio.
enum class GainBranch {
  /// Both sides use the error-propagation dphi; prediction 1/N.
  ErrorPropagation,
  /// The classical side is energy limited: dphi_cl = kappa / (<H>_cl - E0), prediction 1/(2 kappa N).
  EnergyLimitedClassical,
};

std::string_view to_string(GainBranch branch);

struct GainReport {
  double n_probes = 0.0;
  double delta_phi_sq = 0.0;
  double delta_phi_cl = 0.0;
  double ratio = 0.0;
  double predicted = 0.0;
  ProbeCountRule probe_count_rule = ProbeCountRule::EnergyRatio;
  GainBranch branch = GainBranch::ErrorPropagation;
  StrategyProfile sq_profile;
  StrategyProfile cl_profile;
};

struct GainOptions {
  GroundConvention ground = GroundConvention::Spectrum;
  /// Overrides the rule chosen from the classical classification.
  std::optional<ProbeCountRule> forced_rule;
};

GainReport gain_report(const Probe& sq, const Probe& cl, const BoundConstants& constants = {},
                       const GainOptions& options = {});

}  // namespace squeezelab
