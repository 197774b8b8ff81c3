// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace squeezelab {

namespace {

using Triplet = Eigen::Triplet<cplx>;

constexpr cplx kI{0.0, 1.0};

SparseMatrix from_triplets(int dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double max_abs_coeff(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpec

HilbertSpec HilbertSpec::fock(int dim) {
  if (dim < 1) {
    throw Error(ErrorCode::InvalidDimension, "Fock dimension must be >= 1, got " + std::to_string(dim));
  }
  return HilbertSpec(Kind::Fock, dim);
}

HilbertSpec HilbertSpec::spin(int two_j) {
  if (two_j < 0) {
    throw Error(ErrorCode::InvalidDimension, "two_j must be >= 0, got " + std::to_string(two_j));
  }
  return HilbertSpec(Kind::Spin, two_j);
}

int HilbertSpec::two_j() const {
  if (kind_ != Kind::Spin) {
    throw Error(ErrorCode::InvalidParameter, "two_j requested on a Fock space");
  }
  return param_;
}

std::string HilbertSpec::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Fock) {
    os << "fock(dim=" << param_ << ")";
  } else {
    os << "spin(two_j=" << param_ << ")";
  }
  return os.str();
}

void require_same_space(const HilbertSpec& expected, const HilbertSpec& actual, std::string_view what) {
  if (!(expected == actual)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": space " + actual.describe() +
                                                  " does not match " + expected.describe());
  }
}

void require_hermitian(const Operator& op, std::string_view what) {
  if (!op.hermitian()) {
    std::ostringstream os;
    os << what << " is not Hermitian (max |M - M^dagger| = " << op.hermitian_defect() << ")";
    throw Error(ErrorCode::NotHermitian, os.str());
  }
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertSpec space, SparseMatrix entries) : space_(space), entries_(std::move(entries)) {
  const int d = space_.dimension();
  if (entries_.rows() != d || entries_.cols() != d) {
    std::ostringstream os;
    os << "operator entries are " << entries_.rows() << "x" << entries_.cols() << " but " << space_.describe()
       << " has dimension " << d;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  entries_.makeCompressed();
  const SparseMatrix adj = entries_.adjoint();
  hermitian_defect_ = max_abs_coeff(entries_ - adj);
  anti_hermitian_defect_ = max_abs_coeff(entries_ + adj);
  diagonal_ = true;
  for (int k = 0; k < entries_.outerSize() && diagonal_; ++k) {
    for (SparseMatrix::InnerIterator it(entries_, k); it; ++it) {
      if (it.row() != it.col() && it.value() != cplx{0.0, 0.0}) {
        diagonal_ = false;
        break;
      }
    }
  }
}

Operator Operator::from_dense(HilbertSpec space, const DenseMatrix& entries) {
  return Operator(space, entries.sparseView(0.0, 0.0));
}

Operator Operator::identity(HilbertSpec space) {
  SparseMatrix m(space.dimension(), space.dimension());
  m.setIdentity();
  return Operator(space, std::move(m));
}

Operator Operator::zero(HilbertSpec space) {
  return Operator(space, SparseMatrix(space.dimension(), space.dimension()));
}

double Operator::max_abs() const { return max_abs_coeff(entries_); }

Operator Operator::adjoint() const { return Operator(space_, SparseMatrix(entries_.adjoint())); }

Operator Operator::hermitian_part() const {
  SparseMatrix sym = 0.5 * (entries_ + SparseMatrix(entries_.adjoint()));
  return Operator(space_, std::move(sym));
}

cplx Operator::expectation(const StateVector& state) const {
  require_same_space(space_, state.space(), "expectation");
  const Vector& psi = state.amplitudes();
  return psi.dot(entries_ * psi);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator sum");
  return Operator(a.space_, a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator difference");
  return Operator(a.space_, a.entries_ - b.entries_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator product");
  return Operator(a.space_, SparseMatrix(a.entries_ * b.entries_));
}

Operator operator*(cplx s, const Operator& a) { return Operator(a.space_, s * a.entries_); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

// ---------------------------------------------------------------------------
// StateVector

int tail_start(int dim) {
  const int count = std::max(1, (dim + 9) / 10);
  return std::max(0, dim - count);
}

double tail_weight(const HilbertSpec& space, const Vector& amplitudes) {
  if (!space.is_fock()) {
    return 0.0;
  }
  const int d = static_cast<int>(amplitudes.size());
  const int start = tail_start(d);
  return amplitudes.segment(start, d - start).squaredNorm();
}

StateVector::StateVector(HilbertSpec space, Vector amplitudes) : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dimension()) {
    std::ostringstream os;
    os << "state has " << amplitudes_.size() << " amplitudes but " << space_.describe() << " has dimension "
       << space_.dimension();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "state norm " << norm << " deviates from 1";
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
  tail_weight_ = squeezelab::tail_weight(space_, amplitudes_);
}

StateVector StateVector::normalized(HilbertSpec space, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidParameter, "cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(space, std::move(amplitudes));
}

StateVector StateVector::basis(HilbertSpec space, int index) {
  if (index < 0 || index >= space.dimension()) {
    throw Error(ErrorCode::InvalidParameter, "basis index " + std::to_string(index) + " outside " + space.describe());
  }
  Vector v = Vector::Zero(space.dimension());
  v(index) = 1.0;
  return StateVector(space, std::move(v));
}

void StateVector::require_trusted(double threshold) const {
  if (tail_weight_ > threshold) {
    std::ostringstream os;
    os << "tail weight " << tail_weight_ << " on " << space_.describe() << " exceeds " << threshold
       << "; increase the truncation";
    throw TruncationError(os.str(), tail_weight_, 2 * dimension());
  }
}

// ---------------------------------------------------------------------------
// Builders

std::string_view to_string(FockKind kind) {
  switch (kind) {
    case FockKind::Annihilation: return "annihilation";
    case FockKind::Creation: return "creation";
    case FockKind::Number: return "number";
    case FockKind::X: return "X";
    case FockKind::P: return "P";
    case FockKind::EPlus: return "E_plus";
    case FockKind::EMinus: return "E_minus";
    case FockKind::Cosine: return "cosine";
    case FockKind::Sine: return "sine";
  }
  return "?";
}

std::string_view to_string(SpinKind kind) {
  switch (kind) {
    case SpinKind::Jx: return "Jx";
    case SpinKind::Jy: return "Jy";
    case SpinKind::Jz: return "Jz";
    case SpinKind::JPlus: return "J_plus";
    case SpinKind::JMinus: return "J_minus";
  }
  return "?";
}

FockKind parse_fock_kind(std::string_view name) {
  for (FockKind k : {FockKind::Annihilation, FockKind::Creation, FockKind::Number, FockKind::X, FockKind::P,
                     FockKind::EPlus, FockKind::EMinus, FockKind::Cosine, FockKind::Sine}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown Fock operator '" + std::string(name) + "'");
}

SpinKind parse_spin_kind(std::string_view name) {
  for (SpinKind k : {SpinKind::Jx, SpinKind::Jy, SpinKind::Jz, SpinKind::JPlus, SpinKind::JMinus}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown spin operator '" + std::string(name) + "'");
}

Operator build_fock_operator(FockKind kind, int dim) {
  if (dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "Fock operators need dim >= 2, got " + std::to_string(dim));
  }
  const HilbertSpec space = HilbertSpec::fock(dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Triplet> t;
  t.reserve(2 * static_cast<std::size_t>(dim));

  // a|n> = sqrt(n)|n-1>, E+|n-1> = |n>
  auto ladder = [&](cplx down, cplx up, bool unit) {
    for (int n = 1; n < dim; ++n) {
      const double amp = unit ? 1.0 : std::sqrt(static_cast<double>(n));
      if (down != cplx{0.0, 0.0}) t.emplace_back(n - 1, n, down * amp);
      if (up != cplx{0.0, 0.0}) t.emplace_back(n, n - 1, up * amp);
    }
  };

  switch (kind) {
    case FockKind::Annihilation: ladder(1.0, 0.0, false); break;
    case FockKind::Creation: ladder(0.0, 1.0, false); break;
    case FockKind::Number:
      for (int n = 1; n < dim; ++n) t.emplace_back(n, n, static_cast<double>(n));
      break;
    case FockKind::X: ladder(inv_sqrt2, inv_sqrt2, false); break;
    case FockKind::P: ladder(-kI * inv_sqrt2, kI * inv_sqrt2, false); break;
    case FockKind::EPlus: ladder(0.0, 1.0, true); break;
    case FockKind::EMinus: ladder(1.0, 0.0, true); break;
    case FockKind::Cosine: ladder(0.5, 0.5, true); break;
    case FockKind::Sine: ladder(-0.5 * kI, 0.5 * kI, true); break;
  }
  return Operator(space, from_triplets(dim, t));
}

Operator build_spin_operator(SpinKind kind, int two_j) {
  if (two_j < 1) {
    throw Error(ErrorCode::InvalidDimension, "spin operators need two_j >= 1, got " + std::to_string(two_j));
  }
  const HilbertSpec space = HilbertSpec::spin(two_j);
  const int dim = space.dimension();
  const double j = 0.5 * two_j;
  std::vector<Triplet> t;
  t.reserve(2 * static_cast<std::size_t>(dim));

  // <m+1|J+|m> = sqrt(j(j+1) - m(m+1)) with m = -j + k
  auto ladder = [&](cplx down, cplx up) {
    for (int k = 0; k + 1 < dim; ++k) {
      const double m = -j + k;
      const double amp = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
      if (up != cplx{0.0, 0.0}) t.emplace_back(k + 1, k, up * amp);
      if (down != cplx{0.0, 0.0}) t.emplace_back(k, k + 1, down * amp);
    }
  };

  switch (kind) {
    case SpinKind::Jz:
      for (int k = 0; k < dim; ++k) {
        const double m = -j + k;
        if (m != 0.0) t.emplace_back(k, k, m);
      }
      break;
    case SpinKind::JPlus: ladder(0.0, 1.0); break;
    case SpinKind::JMinus: ladder(1.0, 0.0); break;
    case SpinKind::Jx: ladder(0.5, 0.5); break;
    // Jy = (J+ - J-) / 2i
    case SpinKind::Jy: ladder(0.5 * kI, -0.5 * kI); break;
  }
  return Operator(space, from_triplets(dim, t));
}

// ---------------------------------------------------------------------------
// Moments

double MomentReport::sd_A() const { return std::sqrt(std::max(var_A, 0.0)); }
double MomentReport::sd_H() const { return std::sqrt(std::max(var_H, 0.0)); }

MomentReport moment_report(const StateVector& state, const Operator& A, const Operator& H) {
  require_same_space(state.space(), A.space(), "moment_report A");
  require_same_space(state.space(), H.space(), "moment_report H");
  require_hermitian(A, "A");
  require_hermitian(H, "H");

  const Vector& psi = state.amplitudes();
  Vector u = A.apply(psi);
  Vector w = H.apply(psi);
  MomentReport r;
  r.mean_A = psi.dot(u).real();
  r.mean_H = psi.dot(w).real();
  u -= r.mean_A * psi;
  w -= r.mean_H * psi;

  // <u|w> = (1/2)<{A,H}> - <A><H> + (i/2) <[A,H]>/i
  const cplx g = u.dot(w);
  r.var_A = u.squaredNorm();
  r.var_H = w.squaredNorm();
  r.cov_AH = g.real();
  r.mean_C = cplx{0.0, 2.0 * g.imag()};
  r.schrodinger_slack = r.var_A * r.var_H - std::norm(g);
  return r;
}

SgurReport check_sgur(const StateVector& state, double tail_threshold) {
  if (!state.space().is_fock()) {
    throw Error(ErrorCode::InvalidParameter, "Susskind-Glogower relations need a Fock state");
  }
  state.require_trusted(tail_threshold);
  const int dim = state.dimension();
  if (dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "Susskind-Glogower relations need dim >= 2");
  }
  const Operator n_op = build_fock_operator(FockKind::Number, dim);
  const Operator cos_op = build_fock_operator(FockKind::Cosine, dim);
  const Operator sin_op = build_fock_operator(FockKind::Sine, dim);

  const MomentReport nc = moment_report(state, n_op, cos_op);
  const MomentReport ns = moment_report(state, n_op, sin_op);
  SgurReport r;
  r.mean_N = nc.mean_A;
  r.sd_N = nc.sd_A();
  r.mean_cos = nc.mean_H;
  r.sd_cos = nc.sd_H();
  r.mean_sin = ns.mean_H;
  r.sd_sin = ns.sd_H();
  r.slack_C = r.sd_N * r.sd_cos - 0.5 * std::abs(r.mean_sin);
  r.slack_S = r.sd_N * r.sd_sin - 0.5 * std::abs(r.mean_cos);
  return r;
}

}  // namespace squeezelab
