// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Intelligent states (eigenstates of L(lambda) = lambda A + i H), displaced
 * squeezed Fock states, su(2) coherent states, and the spin squeezing search.
 */

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "squeezelab/hilbert.hpp"
#include "squeezelab/resources.hpp"

namespace squeezelab {

enum class SqueezingRegime {
  /// |lambda| > 1
  SqueezedA,
  /// |lambda| = 1
  Coherent,
  /// |lambda| < 1
  SqueezedH,
};

std::string_view to_string(SqueezingRegime regime);

struct SqueezingParameter {
  cplx lambda{1.0, 0.0};
  SqueezingRegime regime = SqueezingRegime::Coherent;

  /// Throws Regime unless Re(lambda) > 0.
  static SqueezingParameter from(cplx lambda);
};

struct IntelligentState {
  SqueezingParameter lambda;
  cplx eigenvalue{0.0, 0.0};
  StateVector state;
  /// |L v - z v|
  double residual = 0.0;
  /// Deviations from
  ///   dA^2 = |<C>| / (2 Re l),  dH^2 = |l|^2 |<C>| / (2 Re l),  cov = -|<C>| Im l / (2 Re l).
  std::array<double, 3> trifonov_residuals{};
  MomentReport moments;
  /// False when <[A,H]> vanishes: such states carry no phase signal.
  bool usable = true;

  double max_trifonov_residual() const;
};

/// Annotates an eigenvector of L(lambda) with its residual and moment identities.
IntelligentState make_intelligent_state(const Operator& A, const Operator& H, const SqueezingParameter& lambda,
                                        cplx eigenvalue, const StateVector& state);

/// Dense eigendecomposition of lambda A + i H. Keeps eigenpairs with residual
/// <= accept_tol and, on Fock spaces, an acceptable tail weight. Sorted by |z|.
std::vector<IntelligentState> solve_intelligent_states(const Operator& A, const Operator& H, cplx lambda,
                                                       double accept_tol = 1e-8);

/// Approximate eigenvector of L(lambda) with eigenvalue near `target`: the
/// smallest right singular vector of L - target. Empty when the residual or
/// tail gate fails.
std::optional<IntelligentState> solve_intelligent_state_at(const Operator& A, const Operator& H, cplx lambda,
                                                           cplx target, double accept_tol = 1e-8);

/// D(alpha) S(xi) |0>, with dP = e^{-xi}/sqrt(2) and dX = e^{xi}/sqrt(2).
/// Throws TruncationError when dim is too small.
StateVector displaced_squeezed_state(cplx alpha, double xi, int dim);

struct BogoliubovPair {
  double mu = 1.0;
  double nu = 0.0;
};

BogoliubovPair bogoliubov_from_lambda(double lambda);

/// exp(beta J+ - beta* J-) |j, -j> with beta = -e^{-i phi} tan(theta/2).
StateVector su2_coherent_state(int two_j, double theta, double phi);

/// {2^{k/2} : k = 1 .. 2 ceil(log2(4j))}
std::vector<double> default_spin_lambda_grid(int two_j);

struct SpinSearchResult {
  IntelligentState best;
  double delta_phi = 0.0;
  StrategyProfile profile;
  int candidates = 0;
};

/// Best eigenstate of lambda Jx + i(-Jy) over the grid by predicted dphi,
/// skipping states with too little energy.
SpinSearchResult spin_squeezed_search(int two_j, const std::vector<double>& lambda_grid,
                                      const BoundConstants& constants = {});

}  // namespace squeezelab
