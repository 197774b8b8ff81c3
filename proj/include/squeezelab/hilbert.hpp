// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Operator and state algebra on truncated Fock spaces and spin-j spaces,
 * together with moment reports and uncertainty-relation checkers.
 *
 * Units are hbar = m = omega = 1 throughout. Fock operators are the
 * truncations of the infinite ladder matrices to the kept basis |0>..|d-1>;
 * spin operators use the Jz eigenbasis ordered m = -j, ..., +j.
 */

#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "squeezelab/errors.hpp"

namespace squeezelab {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance used to detect (anti-)Hermitian operators.
inline constexpr double kHermitianTol = 1e-12;
/// Allowed deviation of a state norm from one.
inline constexpr double kNormTol = 1e-10;
/// A Fock state is trusted when the mass on the top 10% of levels is below this.
inline constexpr double kTailThreshold = 1e-8;
/// Default Fock truncation.
inline constexpr int kDefaultFockDim = 256;

class HilbertSpec {
 public:
  enum class Kind { Fock, Spin };

  static HilbertSpec fock(int dim);
  static HilbertSpec spin(int two_j);

  Kind kind() const noexcept { return kind_; }
  bool is_fock() const noexcept { return kind_ == Kind::Fock; }
  bool is_spin() const noexcept { return kind_ == Kind::Spin; }
  int dimension() const noexcept { return kind_ == Kind::Fock ? param_ : param_ + 1; }
  /// Twice the spin quantum number. Only meaningful for spin spaces.
  int two_j() const;
  double j() const { return 0.5 * two_j(); }

  std::string describe() const;

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

 private:
  HilbertSpec(Kind kind, int param) : kind_(kind), param_(param) {}

  Kind kind_;
  int param_;
};

class StateVector;

/// Square complex matrix acting on a declared space. Entries are stored
/// sparsely; dense views are produced on demand for eigenproblems.
class Operator {
 public:
  Operator(HilbertSpec space, SparseMatrix entries);

  static Operator from_dense(HilbertSpec space, const DenseMatrix& entries);
  static Operator identity(HilbertSpec space);
  static Operator zero(HilbertSpec space);

  const HilbertSpec& space() const noexcept { return space_; }
  int dimension() const noexcept { return space_.dimension(); }
  const SparseMatrix& entries() const noexcept { return entries_; }
  DenseMatrix dense() const { return DenseMatrix(entries_); }

  bool hermitian() const noexcept { return hermitian_defect_ <= kHermitianTol; }
  bool anti_hermitian() const noexcept { return anti_hermitian_defect_ <= kHermitianTol; }
  /// max |M - M^dagger|
  double hermitian_defect() const noexcept { return hermitian_defect_; }
  double anti_hermitian_defect() const noexcept { return anti_hermitian_defect_; }
  bool diagonal() const noexcept { return diagonal_; }

  cplx coeff(int row, int col) const { return entries_.coeff(row, col); }
  /// Largest absolute entry.
  double max_abs() const;

  Operator adjoint() const;
  /// (M + M^dagger) / 2, exactly Hermitian.
  Operator hermitian_part() const;

  Vector apply(const Vector& v) const { return entries_ * v; }
  /// <psi|M|psi>
  cplx expectation(const StateVector& state) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);
  friend Operator operator-(const Operator& a) { return cplx{-1.0, 0.0} * a; }

 private:
  HilbertSpec space_;
  SparseMatrix entries_;
  double hermitian_defect_ = 0.0;
  double anti_hermitian_defect_ = 0.0;
  bool diagonal_ = false;
};

/// Normalized pure state. For Fock spaces the tail weight is the probability
/// mass on the top 10% of the kept number states.
class StateVector {
 public:
  /// Throws InvalidParameter if the norm deviates from one by more than kNormTol.
  StateVector(HilbertSpec space, Vector amplitudes);

  static StateVector normalized(HilbertSpec space, Vector amplitudes);
  static StateVector basis(HilbertSpec space, int index);
  static StateVector vacuum(int dim) { return basis(HilbertSpec::fock(dim), 0); }
  /// |j; m> with m = -j + index.
  static StateVector spin_basis(int two_j, int index) { return basis(HilbertSpec::spin(two_j), index); }

  const HilbertSpec& space() const noexcept { return space_; }
  int dimension() const noexcept { return space_.dimension(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  double tail_weight() const noexcept { return tail_weight_; }
  bool trusted(double threshold = kTailThreshold) const noexcept { return tail_weight_ <= threshold; }

  /// Throws TruncationError if the tail weight exceeds the threshold.
  void require_trusted(double threshold = kTailThreshold) const;

  cplx overlap(const StateVector& other) const { return amplitudes_.dot(other.amplitudes_); }

 private:
  HilbertSpec space_;
  Vector amplitudes_;
  double tail_weight_ = 0.0;
};

/// Index of the first level counted in the tail of a Fock space of size dim.
int tail_start(int dim);

/// Probability mass on the top 10% of levels (zero for spin spaces).
double tail_weight(const HilbertSpec& space, const Vector& amplitudes);

enum class FockKind { Annihilation, Creation, Number, X, P, EPlus, EMinus, Cosine, Sine };
enum class SpinKind { Jx, Jy, Jz, JPlus, JMinus };

std::string_view to_string(FockKind kind);
std::string_view to_string(SpinKind kind);
FockKind parse_fock_kind(std::string_view name);
SpinKind parse_spin_kind(std::string_view name);

/// Truncated ladder-algebra matrices in the Fock basis. E+ = sum |n><n-1|.
Operator build_fock_operator(FockKind kind, int dim);

/// Angular momentum matrices in the Jz eigenbasis, m = -j..+j.
Operator build_spin_operator(SpinKind kind, int two_j);

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

/// First and second moments of a Hermitian pair (A, H) on a pure state.
struct MomentReport {
  double mean_A = 0.0;
  double mean_H = 0.0;
  double var_A = 0.0;
  double var_H = 0.0;
  /// (1/2)<{A,H}> - <A><H>
  double cov_AH = 0.0;
  /// <[A,H]>
  cplx mean_C{0.0, 0.0};
  /// var_A var_H - |<C>/2|^2 - cov_AH^2
  double schrodinger_slack = 0.0;

  double sd_A() const;
  double sd_H() const;
};

MomentReport moment_report(const StateVector& state, const Operator& A, const Operator& H);

/// Susskind-Glogower relations dN dC >= |<S>|/2 and dN dS >= |<C>|/2.
struct SgurReport {
  double slack_C = 0.0;
  double slack_S = 0.0;
  double mean_N = 0.0;
  double sd_N = 0.0;
  double mean_cos = 0.0;
  double mean_sin = 0.0;
  double sd_cos = 0.0;
  double sd_sin = 0.0;
};

SgurReport check_sgur(const StateVector& state, double tail_threshold = kTailThreshold);

/// Throws DimensionMismatch unless every operator lives on the state's space.
void require_same_space(const HilbertSpec& expected, const HilbertSpec& actual, std::string_view what);
void require_hermitian(const Operator& op, std::string_view what);

}  // namespace squeezelab
