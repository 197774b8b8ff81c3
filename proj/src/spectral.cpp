// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace squeezelab {

namespace {

Eigen::VectorXd real_diagonal(const Operator& op) {
  Eigen::VectorXd d(op.dimension());
  const Vector dc = op.entries().diagonal();
  for (int i = 0; i < d.size(); ++i) {
    d(i) = dc(i).real();
  }
  return d;
}

double one_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      col += std::abs(it.value());
    }
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const Operator& op) {
  require_hermitian(op, "operator");
  HermitianEigensystem out;
  if (op.diagonal()) {
    const Eigen::VectorXd d = real_diagonal(op);
    std::vector<int> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d(a) < d(b); });
    out.values.resize(d.size());
    out.vectors = DenseMatrix::Zero(d.size(), d.size());
    for (int k = 0; k < d.size(); ++k) {
      out.values(k) = d(order[k]);
      out.vectors(order[k], k) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(op.dense());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidParameter, "Hermitian eigensolver did not converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Operator& op) {
  require_hermitian(op, "operator");
  if (op.diagonal()) {
    Eigen::VectorXd d = real_diagonal(op);
    std::sort(d.data(), d.data() + d.size());
    return d;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(op.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidParameter, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

Vector expm_action(const SparseMatrix& generator, cplx t, const Vector& v) {
  const double scale = std::abs(t) * one_norm(generator);
  const int steps = std::max(1, static_cast<int>(std::ceil(scale / 2.0)));
  const cplx dt = t / static_cast<double>(steps);
  constexpr int kMaxTerms = 80;
  Vector out = v;
  for (int s = 0; s < steps; ++s) {
    Vector term = out;
    Vector acc = out;
    const double ref = out.norm();
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = (dt / static_cast<double>(k)) * (generator * term);
      acc += term;
      if (term.norm() <= 1e-18 * ref) {
        break;
      }
    }
    out = std::move(acc);
  }
  return out;
}

enum class PropagatorMode { Diagonal, Spectral, Taylor };

struct PropagatorData {
  explicit PropagatorData(const Operator& op) : H(op) {}

  Operator H;
  PropagatorMode mode = PropagatorMode::Taylor;
  Eigen::VectorXd diag;
  HermitianEigensystem eig;

  Vector rotate(const Vector& c, const Eigen::VectorXd& energies, double phi) const {
    Vector out(c.size());
    for (int i = 0; i < c.size(); ++i) {
      out(i) = std::polar(1.0, energies(i) * phi) * c(i);
    }
    return out;
  }

  Vector apply(const Vector& v, double phi) const {
    switch (mode) {
      case PropagatorMode::Diagonal:
        return rotate(v, diag, phi);
      case PropagatorMode::Spectral:
        return eig.vectors * rotate(eig.vectors.adjoint() * v, eig.values, phi);
      case PropagatorMode::Taylor:
        return expm_action(H.entries(), cplx{0.0, phi}, v);
    }
    return v;
  }
};

Propagator::Propagator(const Operator& H) {
  require_hermitian(H, "H");
  auto data = std::make_shared<PropagatorData>(H);
  if (H.diagonal()) {
    data->mode = PropagatorMode::Diagonal;
    data->diag = real_diagonal(H);
  } else if (H.dimension() <= kDenseSpectralLimit) {
    data->mode = PropagatorMode::Spectral;
    data->eig = hermitian_eigensystem(H);
  } else {
    data->mode = PropagatorMode::Taylor;
  }
  data_ = std::move(data);
}

const Operator& Propagator::generator() const noexcept { return data_->H; }

Vector Propagator::apply(const Vector& v, double phi) const { return data_->apply(v, phi); }

StateVector Propagator::evolve(const StateVector& state, double phi) const {
  require_same_space(data_->H.space(), state.space(), "evolve");
  return StateVector(state.space(), apply(state.amplitudes(), phi));
}

Propagator::Trajectory Propagator::trajectory(const Vector& start) const {
  Trajectory t;
  t.data_ = data_;
  t.start_ = start;
  if (data_->mode == PropagatorMode::Spectral) {
    t.coefficients_ = data_->eig.vectors.adjoint() * start;
  }
  return t;
}

Vector Propagator::Trajectory::at(double phi) const {
  if (data_->mode == PropagatorMode::Spectral) {
    return data_->eig.vectors * data_->rotate(coefficients_, data_->eig.values, phi);
  }
  return data_->apply(start_, phi);
}

}  // namespace squeezelab
