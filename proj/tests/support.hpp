// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "squeezelab/hilbert.hpp"

namespace squeezelab::testing {

inline Vector random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx{g(rng), g(rng)};
  return v / v.norm();
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = cplx{g(rng), g(rng)};
  return m;
}

inline Operator random_hermitian(std::mt19937_64& rng, const HilbertSpec& space) {
  const DenseMatrix m = random_matrix(rng, space.dimension());
  return Operator::from_dense(space, 0.5 * (m + m.adjoint()));
}

inline DenseMatrix random_unitary(std::mt19937_64& rng, int d) {
  Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(rng, d));
  return qr.householderQ() * DenseMatrix::Identity(d, d);
}

inline StateVector random_state(std::mt19937_64& rng, const HilbertSpec& space) {
  return StateVector(space, random_unit(rng, space.dimension()));
}

}  // namespace squeezelab::testing
