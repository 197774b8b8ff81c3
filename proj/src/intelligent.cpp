// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/intelligent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "squeezelab/estimation.hpp"
#include "squeezelab/spectral.hpp"

namespace squeezelab {

namespace {

constexpr double kRegimeTol = 1e-12;
constexpr double kSignalFloor = 1e-10;
constexpr double kDuplicateOverlap = 1.0 - 1e-8;
constexpr double kEnergyCheckTol = 1e-6;

DenseMatrix build_L(const Operator& A, const Operator& H, cplx lambda) {
  return (lambda * A + cplx{0.0, 1.0} * H).dense();
}

void check_pair(const Operator& A, const Operator& H) {
  require_same_space(A.space(), H.space(), "intelligent states");
  require_hermitian(A, "A");
  require_hermitian(H, "H");
}

}  // namespace

std::string_view to_string(SqueezingRegime regime) {
  switch (regime) {
    case SqueezingRegime::SqueezedA: return "SqueezedA";
    case SqueezingRegime::Coherent: return "Coherent";
    case SqueezingRegime::SqueezedH: return "SqueezedH";
  }
  return "?";
}

SqueezingParameter SqueezingParameter::from(cplx lambda) {
  if (!(lambda.real() > 0.0) || !std::isfinite(std::abs(lambda))) {
    std::ostringstream os;
    os << "Re(lambda) = " << lambda.real() << ": eigenstates of L(lambda) are only normalizable for Re(lambda) > 0";
    throw Error(ErrorCode::Regime, os.str());
  }
  SqueezingParameter p;
  p.lambda = lambda;
  const double mag = std::abs(lambda);
  if (std::abs(mag - 1.0) <= kRegimeTol) {
    p.regime = SqueezingRegime::Coherent;
  } else {
    p.regime = mag > 1.0 ? SqueezingRegime::SqueezedA : SqueezingRegime::SqueezedH;
  }
  return p;
}

double IntelligentState::max_trifonov_residual() const {
  return *std::max_element(trifonov_residuals.begin(), trifonov_residuals.end());
}

IntelligentState make_intelligent_state(const Operator& A, const Operator& H, const SqueezingParameter& lambda,
                                        cplx eigenvalue, const StateVector& state) {
  const cplx l = lambda.lambda;
  const Vector& v = state.amplitudes();
  const Vector lv = l * A.apply(v) + cplx{0.0, 1.0} * H.apply(v);
  IntelligentState out{lambda, eigenvalue, state, (lv - eigenvalue * v).norm(), {}, moment_report(state, A, H), true};
  const double c = std::abs(out.moments.mean_C);
  const double re = l.real();
  out.trifonov_residuals = {
      std::abs(out.moments.var_A - c / (2.0 * re)),
      std::abs(out.moments.var_H - std::norm(l) * c / (2.0 * re)),
      std::abs(out.moments.cov_AH + c * l.imag() / (2.0 * re)),
  };
  out.usable = c > kSignalFloor;
  return out;
}

std::vector<IntelligentState> solve_intelligent_states(const Operator& A, const Operator& H, cplx lambda,
                                                       double accept_tol) {
  check_pair(A, H);
  const SqueezingParameter param = SqueezingParameter::from(lambda);
  const DenseMatrix L = build_L(A, H, lambda);
  Eigen::ComplexEigenSolver<DenseMatrix> solver(L, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidParameter, "non-Hermitian eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  std::vector<int> order(static_cast<std::size_t>(values.size()));
  for (int k = 0; k < values.size(); ++k) {
    order[static_cast<std::size_t>(k)] = k;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (ma != mb) return ma < mb;
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  std::vector<IntelligentState> out;
  for (int k : order) {
    Vector v = vectors.col(k);
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      continue;
    }
    v /= norm;
    const cplx z = values(k);
    if ((L * v - z * v).norm() > accept_tol) {
      continue;
    }
    if (tail_weight(A.space(), v) > kTailThreshold) {
      continue;
    }
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const IntelligentState& s) {
      return std::abs(s.state.amplitudes().dot(v)) > kDuplicateOverlap;
    });
    if (duplicate) {
      continue;
    }
    out.push_back(make_intelligent_state(A, H, param, z, StateVector(A.space(), v)));
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "no eigenpair of L(" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag()
       << "i) on " << A.space().describe() << " passes the residual and tail gates";
    throw Error(ErrorCode::EmptyResult, os.str());
  }
  return out;
}

std::optional<IntelligentState> solve_intelligent_state_at(const Operator& A, const Operator& H, cplx lambda,
                                                           cplx target, double accept_tol) {
  check_pair(A, H);
  const SqueezingParameter param = SqueezingParameter::from(lambda);
  const DenseMatrix L = build_L(A, H, lambda);
  const int d = static_cast<int>(L.rows());
  DenseMatrix M = L;
  M.diagonal().array() -= target;
  // The smallest right singular vector minimizes |(L - target) v|. Inverse
  // iteration is not an option: near-Jordan blocks make (L - target)^-1 overflow.
  const Eigen::JacobiSVD<DenseMatrix> svd(M, Eigen::ComputeFullV);
  if (!svd.singularValues().allFinite()) {
    return std::nullopt;
  }
  Vector v = svd.matrixV().col(d - 1);
  // Fix the global phase so results are reproducible.
  int pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  v *= std::conj(v(pivot)) / std::abs(v(pivot));

  const cplx z = v.dot(L * v);
  if ((L * v - z * v).norm() > accept_tol || tail_weight(A.space(), v) > kTailThreshold) {
    return std::nullopt;
  }
  return make_intelligent_state(A, H, param, z, StateVector(A.space(), v));
}

StateVector displaced_squeezed_state(cplx alpha, double xi, int dim) {
  const HilbertSpec space = HilbertSpec::fock(dim);
  if (!std::isfinite(xi) || !std::isfinite(std::abs(alpha))) {
    throw Error(ErrorCode::InvalidParameter, "alpha and xi must be finite");
  }
  Vector amps = Vector::Zero(dim);
  const double t = std::tanh(xi);
  amps(0) = 1.0 / std::sqrt(std::cosh(xi));
  for (int m = 0; 2 * m + 2 < dim; ++m) {
    const double n1 = 2.0 * m + 1.0;
    const double n2 = 2.0 * m + 2.0;
    amps(2 * m + 2) = amps(2 * m) * t * std::sqrt(n1 * n2) / (2.0 * (m + 1.0));
  }
  StateVector squeezed = StateVector::normalized(space, amps);
  auto fail = [&](double tail, const std::string& extra = "") {
    std::ostringstream os;
    os << "displaced squeezed state (|alpha| = " << std::abs(alpha) << ", xi = " << xi << ") has tail weight "
       << tail << " at dim " << dim << extra;
    throw TruncationError(os.str(), tail, 2 * dim);
  };
  if (!squeezed.trusted()) {
    fail(squeezed.tail_weight());
  }
  if (alpha == cplx{0.0, 0.0}) {
    return squeezed;
  }
  const Operator a = build_fock_operator(FockKind::Annihilation, dim);
  const Operator ad = build_fock_operator(FockKind::Creation, dim);
  const Operator generator = alpha * ad - std::conj(alpha) * a;
  const StateVector out = StateVector::normalized(space, expm_action(generator.entries(), 1.0, squeezed.amplitudes()));
  if (!out.trusted()) {
    fail(out.tail_weight());
  }
  // A displacement far beyond the cutoff wraps around the truncated space and
  // can pass the tail gate, so the photon number is checked as well.
  const double sh = std::sinh(xi);
  const double expected_n = std::norm(alpha) + sh * sh;
  const double mean_n = build_fock_operator(FockKind::Number, dim).expectation(out).real();
  if (std::abs(mean_n - expected_n) > kEnergyCheckTol * std::max(1.0, expected_n)) {
    std::ostringstream os;
    os << " and <N> = " << mean_n << " instead of " << expected_n;
    fail(out.tail_weight(), os.str());
  }
  return out;
}

BogoliubovPair bogoliubov_from_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Regime, "Bogoliubov pair needs lambda > 0");
  }
  const double s = std::sqrt(4.0 * lambda);
  return {(lambda + 1.0) / s, (lambda - 1.0) / s};
}

StateVector su2_coherent_state(int two_j, double theta, double phi) {
  if (two_j < 1) {
    throw Error(ErrorCode::InvalidParameter, "su(2) coherent states need two_j >= 1");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi) || !std::isfinite(phi)) {
    throw Error(ErrorCode::InvalidParameter, "theta must lie in [0, pi] and phi must be finite");
  }
  const StateVector lowest = StateVector::spin_basis(two_j, 0);
  const cplx zeta = -std::polar(theta / 2.0, -phi);
  const Operator generator = zeta * build_spin_operator(SpinKind::JPlus, two_j) -
                             std::conj(zeta) * build_spin_operator(SpinKind::JMinus, two_j);
  return StateVector::normalized(lowest.space(), expm_action(generator.entries(), 1.0, lowest.amplitudes()));
}

std::vector<double> default_spin_lambda_grid(int two_j) {
  if (two_j < 1) {
    throw Error(ErrorCode::InvalidParameter, "two_j must be >= 1");
  }
  const int top = 2 * static_cast<int>(std::ceil(std::log2(2.0 * two_j)));
  std::vector<double> grid;
  for (int k = 1; k <= top; ++k) {
    grid.push_back(std::pow(2.0, 0.5 * k));
  }
  return grid;
}

SpinSearchResult spin_squeezed_search(int two_j, const std::vector<double>& lambda_grid,
                                      const BoundConstants& constants) {
  if (two_j < 4) {
    throw Error(ErrorCode::InvalidParameter, "spin squeezing search needs two_j >= 4");
  }
  if (lambda_grid.empty()) {
    throw Error(ErrorCode::InvalidParameter, "lambda grid is empty");
  }
  for (double l : lambda_grid) {
    if (!(l > 1.0)) {
      std::ostringstream os;
      os << "lambda = " << l << " does not squeeze Jx; grid values must exceed 1";
      throw Error(ErrorCode::Regime, os.str());
    }
  }
  const Operator A = build_spin_operator(SpinKind::Jx, two_j);
  const Operator H = -build_spin_operator(SpinKind::Jy, two_j);
  const double ground = ground_energy(H);

  std::optional<SpinSearchResult> best;
  int candidates = 0;
  for (double l : lambda_grid) {
    for (const IntelligentState& s : solve_intelligent_states(A, H, l)) {
      if (!s.usable) {
        continue;
      }
      StrategyProfile profile;
      try {
        profile = classify_strategy(s.state, H, ground, constants);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateProbe) continue;
        throw;
      }
      if (profile.classification == Strategy::TooLittleEnergy) {
        continue;
      }
      ++candidates;
      const double dphi = s.moments.sd_A() / std::abs(s.moments.mean_C);
      if (!best || dphi < best->delta_phi) {
        best = SpinSearchResult{s, dphi, profile, 0};
      }
    }
  }
  if (!best) {
    throw Error(ErrorCode::EmptyResult, "no eigenstate on the grid qualifies as a squeezed probe");
  }
  best->candidates = candidates;
  return *best;
}

}  // namespace squeezelab
