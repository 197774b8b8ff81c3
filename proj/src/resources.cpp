// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/resources.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "squeezelab/estimation.hpp"
#include "squeezelab/spectral.hpp"

namespace squeezelab {

namespace {

constexpr double kDenominatorFloor = 1e-12;
constexpr double kEnergyFloor = -1e-9;

double checked_denominator(double value, std::string_view what) {
  if (!(value > kDenominatorFloor)) {
    std::ostringstream os;
    os << what << " = " << value << " is not a usable denominator";
    throw Error(ErrorCode::ZeroDenominator, os.str());
  }
  return value;
}

ProbeCount count_with_rule(const StrategyProfile& sq, const StrategyProfile& cl, ProbeCountRule rule) {
  ProbeCount out;
  out.rule = rule;
  switch (rule) {
    case ProbeCountRule::EnergyRatio:
      out.n = sq.energy_above_ground() /
              checked_denominator(cl.energy_above_ground(), "classical energy above ground");
      break;
    case ProbeCountRule::EnergyOverClassicalSd:
      out.n = sq.energy_above_ground() / checked_denominator(cl.sd_energy, "classical energy spread");
      break;
    case ProbeCountRule::SqueezedSdOverClassicalEnergy:
      out.n = sq.sd_energy / checked_denominator(cl.energy_above_ground(), "classical energy above ground");
      break;
  }
  if (!(out.n > 0.0)) {
    throw Error(ErrorCode::ZeroDenominator, "squeezed probe carries no usable energy");
  }
  return out;
}

}  // namespace

void BoundConstants::validate() const {
  if (!(kappa > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "kappa and gamma must be positive");
  }
  if (!(band > 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "good-strategy band must exceed 1");
  }
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Good: return "Good";
    case Strategy::TooMuchEnergy: return "TooMuchEnergy";
    case Strategy::TooLittleEnergy: return "TooLittleEnergy";
  }
  return "?";
}

std::string_view to_string(ProbeCountRule rule) {
  switch (rule) {
    case ProbeCountRule::EnergyRatio: return "EnergyRatio";
    case ProbeCountRule::EnergyOverClassicalSd: return "EnergyOverClassicalSd";
    case ProbeCountRule::SqueezedSdOverClassicalEnergy: return "SqueezedSdOverClassicalEnergy";
  }
  return "?";
}

std::string_view to_string(GainBranch branch) {
  switch (branch) {
    case GainBranch::ErrorPropagation: return "ErrorPropagation";
    case GainBranch::EnergyLimitedClassical: return "EnergyLimitedClassical";
  }
  return "?";
}

double ground_energy(const Operator& H, GroundConvention convention) {
  require_hermitian(H, "H");
  if (convention == GroundConvention::ZeroOverride) {
    return 0.0;
  }
  return hermitian_eigenvalues(H)(0);
}

Strategy classify_ratio(double good_ratio, const BoundConstants& constants) {
  if (good_ratio > constants.band) {
    return Strategy::TooMuchEnergy;
  }
  if (good_ratio < 1.0 / constants.band) {
    return Strategy::TooLittleEnergy;
  }
  return Strategy::Good;
}

StrategyProfile classify_strategy(const StateVector& state, const Operator& H, double ground,
                                  const BoundConstants& constants) {
  constants.validate();
  require_same_space(state.space(), H.space(), "classify_strategy");
  require_hermitian(H, "H");
  const Vector& psi = state.amplitudes();
  const Vector h_psi = H.apply(psi);
  StrategyProfile p;
  p.mean_energy = psi.dot(h_psi).real();
  p.ground_energy = ground;
  p.sd_energy = (h_psi - p.mean_energy * psi).norm();
  if (p.energy_above_ground() < kEnergyFloor) {
    std::ostringstream os;
    os << "mean energy " << p.mean_energy << " lies below the ground energy " << ground;
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
  if (!(p.sd_energy > kDenominatorFloor)) {
    throw Error(ErrorCode::DegenerateProbe, "probe has no energy spread (dH = 0)");
  }
  p.good_ratio = std::max(p.energy_above_ground(), 0.0) / (constants.zeta() * p.sd_energy);
  p.classification = classify_ratio(p.good_ratio, constants);
  return p;
}

ProbeCount probe_count(const StrategyProfile& sq, const StrategyProfile& cl) {
  const ProbeCountRule rule =
      cl.classification == Strategy::Good ? ProbeCountRule::EnergyRatio : ProbeCountRule::EnergyOverClassicalSd;
  return count_with_rule(sq, cl, rule);
}

double heisenberg_lower_bound(const StrategyProfile& profile, int nu, const BoundConstants& constants) {
  constants.validate();
  if (nu < 1) {
    throw Error(ErrorCode::InvalidParameter, "repetition count must be >= 1");
  }
  const double energy = profile.energy_above_ground();
  if (!(energy > 0.0) || !(profile.sd_energy > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "bound needs positive energy above ground and energy spread");
  }
  const double n = static_cast<double>(nu);
  return std::max(constants.kappa / (n * energy), constants.gamma / (std::sqrt(n) * profile.sd_energy));
}

GainReport gain_report(const Probe& sq, const Probe& cl, const BoundConstants& constants,
                       const GainOptions& options) {
  constants.validate();
  GainReport r;
  r.delta_phi_sq = analytic_delta_phi(sq.state, sq.A, sq.H);
  r.sq_profile = classify_strategy(sq.state, sq.H, ground_energy(sq.H, options.ground), constants);
  r.cl_profile = classify_strategy(cl.state, cl.H, ground_energy(cl.H, options.ground), constants);

  const bool energy_limited =
      options.forced_rule ? *options.forced_rule == ProbeCountRule::SqueezedSdOverClassicalEnergy
                          : r.cl_profile.classification == Strategy::TooLittleEnergy;
  if (energy_limited) {
    const ProbeCount count = count_with_rule(r.sq_profile, r.cl_profile, ProbeCountRule::SqueezedSdOverClassicalEnergy);
    r.branch = GainBranch::EnergyLimitedClassical;
    r.probe_count_rule = count.rule;
    r.n_probes = count.n;
    r.delta_phi_cl = constants.kappa / r.cl_profile.energy_above_ground();
    r.predicted = 1.0 / (2.0 * constants.kappa * r.n_probes);
  } else {
    const ProbeCount count = options.forced_rule ? count_with_rule(r.sq_profile, r.cl_profile, *options.forced_rule)
                                                 : probe_count(r.sq_profile, r.cl_profile);
    r.branch = GainBranch::ErrorPropagation;
    r.probe_count_rule = count.rule;
    r.n_probes = count.n;
    r.delta_phi_cl = analytic_delta_phi(cl.state, cl.A, cl.H);
    r.predicted = 1.0 / r.n_probes;
  }
  r.ratio = r.delta_phi_sq / r.delta_phi_cl;
  return r;
}

}  // namespace squeezelab
