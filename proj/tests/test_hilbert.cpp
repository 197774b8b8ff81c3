// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "squeezelab/hilbert.hpp"
#include "support.hpp"

using namespace squeezelab;
using doctest::Approx;

namespace {

const cplx I{0.0, 1.0};

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("spaces report their dimension") {
  CHECK(HilbertSpec::fock(7).dimension() == 7);
  CHECK(HilbertSpec::spin(4).dimension() == 5);
  CHECK(HilbertSpec::spin(4).j() == 2.0);
  CHECK_THROWS_AS(HilbertSpec::fock(0), Error);
  CHECK_THROWS_AS(HilbertSpec::spin(-1), Error);
}

TEST_CASE("number and annihilation matrices") {
  const DenseMatrix n = build_fock_operator(FockKind::Number, 3).dense();
  CHECK(max_abs_diff(n, Eigen::Vector3cd(0, 1, 2).asDiagonal().toDenseMatrix()) == 0.0);

  const Operator a = build_fock_operator(FockKind::Annihilation, 3);
  CHECK(a.coeff(0, 1) == cplx{1.0, 0.0});
  CHECK(std::abs(a.coeff(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(a.entries().nonZeros() == 2);
  CHECK_FALSE(a.hermitian());
}

TEST_CASE("truncated [X, P] is i on the leading block with a -63i corner") {
  const Operator X = build_fock_operator(FockKind::X, 64);
  const Operator P = build_fock_operator(FockKind::P, 64);
  const DenseMatrix c = commutator(X, P).dense();
  CHECK(max_abs_diff(c.topLeftCorner(63, 63), I * DenseMatrix::Identity(63, 63)) <= 1e-12);
  CHECK(std::abs(c(63, 63) - cplx{0.0, -63.0}) <= 1e-12);
  CHECK(c.row(63).head(63).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Fock builders reject tiny spaces") {
  try {
    build_fock_operator(FockKind::X, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDimension);
  }
}

TEST_CASE("susskind-glogower operators are hermitian") {
  for (FockKind k : {FockKind::Cosine, FockKind::Sine, FockKind::X, FockKind::P, FockKind::Number}) {
    CHECK(build_fock_operator(k, 40).hermitian());
  }
  const Operator ep = build_fock_operator(FockKind::EPlus, 5);
  CHECK(ep.coeff(1, 0) == cplx{1.0, 0.0});
  CHECK(ep.coeff(4, 3) == cplx{1.0, 0.0});
  CHECK(ep.entries().nonZeros() == 4);
}

TEST_CASE("spin-1/2 and spin-1 matrices") {
  const DenseMatrix jz = build_spin_operator(SpinKind::Jz, 1).dense();
  CHECK(jz(0, 0) == cplx{-0.5, 0.0});
  CHECK(jz(1, 1) == cplx{0.5, 0.0});
  const DenseMatrix jx = build_spin_operator(SpinKind::Jx, 1).dense();
  CHECK(jx(0, 1) == cplx{0.5, 0.0});
  CHECK(jx(1, 0) == cplx{0.5, 0.0});

  const Vector lowered = build_spin_operator(SpinKind::JPlus, 2).apply(StateVector::spin_basis(2, 0).amplitudes());
  CHECK(std::abs(lowered(1) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(lowered(0)) == 0.0);
  CHECK(std::abs(lowered(2)) == 0.0);
  CHECK_THROWS_AS(build_spin_operator(SpinKind::Jx, 0), Error);
}

TEST_CASE("su(2) closure up to two_j = 64") {
  for (int tj = 1; tj <= 64; ++tj) {
    const Operator jx = build_spin_operator(SpinKind::Jx, tj);
    const Operator jy = build_spin_operator(SpinKind::Jy, tj);
    const Operator jz = build_spin_operator(SpinKind::Jz, tj);
    CHECK((commutator(jx, jy) - I * jz).max_abs() <= 1e-12);
  }
}

TEST_CASE("commutator algebra") {
  std::mt19937_64 rng(11);
  const HilbertSpec s = HilbertSpec::fock(9);
  const Operator A = testing::random_hermitian(rng, s);
  const Operator B = testing::random_hermitian(rng, s);
  CHECK(commutator(A, A).max_abs() == 0.0);
  CHECK((I * commutator(A, B)).hermitian());
  CHECK(commutator(A, B).anti_hermitian());
  CHECK(anticommutator(A, B).hermitian());
  CHECK_THROWS_AS(commutator(A, build_fock_operator(FockKind::X, 10)), Error);
}

TEST_CASE("vacuum moments for (X, P)") {
  const MomentReport m = moment_report(StateVector::vacuum(32), build_fock_operator(FockKind::X, 32),
                                       build_fock_operator(FockKind::P, 32));
  CHECK(m.mean_A == Approx(0.0).epsilon(1e-15));
  CHECK(m.var_A == Approx(0.5).epsilon(1e-14));
  CHECK(m.var_H == Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(m.cov_AH) < 1e-15);
  CHECK(std::abs(m.schrodinger_slack) < 1e-14);
  CHECK(std::abs(m.mean_C - I) < 1e-14);
}

TEST_CASE("lowest weight spin-8 state for (Jx, -Jy)") {
  const StateVector low = StateVector::spin_basis(16, 0);
  const MomentReport m = moment_report(low, build_spin_operator(SpinKind::Jx, 16),
                                       -build_spin_operator(SpinKind::Jy, 16));
  CHECK(m.var_A == Approx(4.0).epsilon(1e-12));
  CHECK(m.var_H == Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(m.mean_C) == Approx(8.0).epsilon(1e-12));
}

TEST_CASE("schrodinger slack is non-negative on random states") {
  std::mt19937_64 rng(2026);
  const HilbertSpec fock = HilbertSpec::fock(32);
  const Operator X = build_fock_operator(FockKind::X, 32);
  const Operator P = build_fock_operator(FockKind::P, 32);
  double worst = 1.0;
  for (int k = 0; k < 1000; ++k) {
    const StateVector s = testing::random_state(rng, fock);
    worst = std::min(worst, moment_report(s, X, P).schrodinger_slack);
    const Operator A = testing::random_hermitian(rng, fock);
    const Operator H = testing::random_hermitian(rng, fock);
    worst = std::min(worst, moment_report(s, A, H).schrodinger_slack);
  }
  for (int k = 0; k < 1000; ++k) {
    const int tj = 1 + k % 32;
    const HilbertSpec spin = HilbertSpec::spin(tj);
    const StateVector s = testing::random_state(rng, spin);
    worst = std::min(worst, moment_report(s, build_spin_operator(SpinKind::Jx, tj),
                                          build_spin_operator(SpinKind::Jy, tj)).schrodinger_slack);
    worst = std::min(worst, moment_report(s, testing::random_hermitian(rng, spin),
                                          testing::random_hermitian(rng, spin)).schrodinger_slack);
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("moment reports do not depend on the basis") {
  std::mt19937_64 rng(5);
  const HilbertSpec s = HilbertSpec::fock(12);
  for (int k = 0; k < 20; ++k) {
    const Operator A = testing::random_hermitian(rng, s);
    const Operator H = testing::random_hermitian(rng, s);
    const StateVector psi = testing::random_state(rng, s);
    const DenseMatrix U = testing::random_unitary(rng, 12);
    const Operator A2 = Operator::from_dense(s, U * A.dense() * U.adjoint()).hermitian_part();
    const Operator H2 = Operator::from_dense(s, U * H.dense() * U.adjoint()).hermitian_part();
    const StateVector psi2 = StateVector::normalized(s, U * psi.amplitudes());
    const MomentReport m1 = moment_report(psi, A, H);
    const MomentReport m2 = moment_report(psi2, A2, H2);
    CHECK(std::abs(m1.mean_A - m2.mean_A) <= 1e-9);
    CHECK(std::abs(m1.mean_H - m2.mean_H) <= 1e-9);
    CHECK(std::abs(m1.var_A - m2.var_A) <= 1e-9);
    CHECK(std::abs(m1.var_H - m2.var_H) <= 1e-9);
    CHECK(std::abs(m1.cov_AH - m2.cov_AH) <= 1e-9);
    CHECK(std::abs(m1.mean_C - m2.mean_C) <= 1e-9);
    CHECK(std::abs(m1.schrodinger_slack - m2.schrodinger_slack) <= 1e-9);
  }
}

TEST_CASE("moment_report rejects non-hermitian inputs") {
  const Operator a = build_fock_operator(FockKind::Annihilation, 8);
  const Operator X = build_fock_operator(FockKind::X, 8);
  try {
    moment_report(StateVector::vacuum(8), a, X);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("state normalization and tail weight") {
  Vector v = Vector::Zero(10);
  v(0) = 2.0;
  CHECK_THROWS_AS(StateVector(HilbertSpec::fock(10), v), Error);
  const StateVector top = StateVector::basis(HilbertSpec::fock(10), 9);
  CHECK(top.tail_weight() == 1.0);
  CHECK_FALSE(top.trusted());
  try {
    top.require_trusted();
    FAIL("expected truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim() == 20);
    CHECK(e.code() == ErrorCode::Truncation);
  }
  CHECK(StateVector::basis(HilbertSpec::fock(10), 8).tail_weight() == 0.0);
  CHECK(StateVector::spin_basis(4, 4).tail_weight() == 0.0);
}

TEST_CASE("SG relations on number states") {
  for (int n : {0, 3}) {
    const SgurReport r = check_sgur(StateVector::basis(HilbertSpec::fock(64), n));
    CHECK(r.sd_N == Approx(0.0));
    CHECK(std::abs(r.mean_cos) < 1e-15);
    CHECK(std::abs(r.mean_sin) < 1e-15);
    CHECK(std::abs(r.slack_C) < 1e-15);
    CHECK(std::abs(r.slack_S) < 1e-15);
  }
}

TEST_CASE("SG relations refuse states near the cutoff") {
  CHECK_THROWS_AS(check_sgur(StateVector::basis(HilbertSpec::fock(20), 19)), TruncationError);
  CHECK_THROWS_AS(check_sgur(StateVector::spin_basis(4, 0)), Error);
}

}  // TEST_SUITE
