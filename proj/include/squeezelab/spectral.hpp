// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include <Eigen/Dense>

#include "squeezelab/hilbert.hpp"

namespace squeezelab {

/// Above this dimension, non-diagonal operators are exponentiated by
/// Taylor stepping instead of a dense spectral decomposition.
inline constexpr int kDenseSpectralLimit = 768;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
struct HermitianEigensystem {
  Eigen::VectorXd values;
  DenseMatrix vectors;
};

HermitianEigensystem hermitian_eigensystem(const Operator& op);
Eigen::VectorXd hermitian_eigenvalues(const Operator& op);

/// exp(t G) v for a sparse generator, by repeated truncated Taylor steps.
Vector expm_action(const SparseMatrix& generator, cplx t, const Vector& v);

struct PropagatorData;

/// Phase-shift generator exp(i H phi) for a fixed Hermitian H. Copies share
/// the precomputed spectral data.
class Propagator {
 public:
  explicit Propagator(const Operator& H);

  const Operator& generator() const noexcept;
  Vector apply(const Vector& v, double phi) const;
  StateVector evolve(const StateVector& state, double phi) const;

  /// Precomputes the eigenbasis coefficients of a fixed starting vector so
  /// that repeated evaluations along a phase grid are cheap.
  class Trajectory {
   public:
    Vector at(double phi) const;

   private:
    friend class Propagator;
    std::shared_ptr<const PropagatorData> data_;
    Vector start_;
    Vector coefficients_;
  };

  Trajectory trajectory(const Vector& start) const;

 private:
  std::shared_ptr<const PropagatorData> data_;
};

}  // namespace squeezelab
