// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "squeezelab/estimation.hpp"
#include "squeezelab/intelligent.hpp"
#include "squeezelab/stats.hpp"
#include "support.hpp"

using namespace squeezelab;
using doctest::Approx;

namespace {

IntelligentState xp_state(double lambda, int dim = 256) {
  return solve_intelligent_states(build_fock_operator(FockKind::X, dim), build_fock_operator(FockKind::P, dim), lambda)
      .front();
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("evolve identities") {
  std::mt19937_64 rng(3);
  const HilbertSpec s = HilbertSpec::fock(16);
  const StateVector psi = testing::random_state(rng, s);
  const Operator H = testing::random_hermitian(rng, s);
  CHECK((evolve(psi, H, 0.0).amplitudes() - psi.amplitudes()).norm() <= 1e-14);
  for (double phi : {0.3, -2.0, 7.5}) {
    CHECK(evolve(psi, H, phi).amplitudes().norm() == Approx(1.0).epsilon(1e-12));
  }

  const StateVector up = StateVector::normalized(HilbertSpec::spin(1), Eigen::Vector2cd(1.0, 1.0));
  const Vector out = evolve(up, build_spin_operator(SpinKind::Jz, 1), std::numbers::pi).amplitudes();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out(0) - r * std::polar(1.0, -std::numbers::pi / 2.0)) <= 1e-12);
  CHECK(std::abs(out(1) - r * std::polar(1.0, std::numbers::pi / 2.0)) <= 1e-12);

  const StateVector vac = StateVector::vacuum(32);
  const Vector back = evolve(vac, build_fock_operator(FockKind::Number, 32), 2.0 * std::numbers::pi).amplitudes();
  CHECK(std::abs(back(0) - cplx{1.0, 0.0}) <= 1e-12);

  CHECK_THROWS_AS(evolve(vac, build_fock_operator(FockKind::Annihilation, 32), 0.1), Error);
}

TEST_CASE("derivative identity on the vacuum") {
  // U = exp(+i P phi) shifts X by -phi.
  const DerivativeCheck d = derivative_identity_check(StateVector::vacuum(64), build_fock_operator(FockKind::X, 64),
                                                      build_fock_operator(FockKind::P, 64), 0.0, 1e-4);
  CHECK(d.analytic == Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(d.analytic_imag) <= 1e-12);
  CHECK(d.numeric == Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("derivative identity on the lowest spin state") {
  const DerivativeCheck d = derivative_identity_check(StateVector::spin_basis(16, 0), build_spin_operator(SpinKind::Jx, 16),
                                                      -build_spin_operator(SpinKind::Jy, 16), 0.0, 1e-4);
  CHECK(std::abs(d.analytic) == Approx(8.0).epsilon(1e-12));
  CHECK(d.numeric == Approx(d.analytic).epsilon(1e-6));
}

TEST_CASE("derivative identity on random tuples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const HilbertSpec s = k % 2 ? HilbertSpec::spin(6) : HilbertSpec::fock(20);
    const StateVector psi = testing::random_state(rng, s);
    const Operator A = testing::random_hermitian(rng, s);
    const Operator H = testing::random_hermitian(rng, s);
    const DerivativeCheck d = derivative_identity_check(psi, A, H, u(rng), 1e-4);
    worst = std::max(worst, std::abs(d.analytic - d.numeric) / std::max(1.0, std::abs(d.analytic)));
    CHECK(std::abs(d.analytic_imag) <= 1e-10);
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("derivative identity on an eigenstate of A") {
  const Operator jz = build_spin_operator(SpinKind::Jz, 6);
  const Operator jx = build_spin_operator(SpinKind::Jx, 6);
  const DerivativeCheck d = derivative_identity_check(StateVector::spin_basis(6, 2), jz, jx, 0.4, 1e-4);
  CHECK(std::abs(d.analytic - d.numeric) <= 1e-4 * std::max(1.0, std::abs(d.analytic)));
}

TEST_CASE("analytic error propagation") {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  CHECK(analytic_delta_phi(xp_state(2.0).state, X, P) == Approx(0.5).epsilon(1e-6));
  CHECK(analytic_delta_phi(xp_state(1.0).state, X, P) == Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(analytic_delta_phi(StateVector::spin_basis(16, 0), build_spin_operator(SpinKind::Jx, 16),
                           -build_spin_operator(SpinKind::Jy, 16)) == Approx(0.25).epsilon(1e-12));
  try {
    analytic_delta_phi(StateVector::vacuum(32), build_fock_operator(FockKind::X, 32),
                       build_fock_operator(FockKind::Number, 32));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnusableProbe);
  }
}

TEST_CASE("sampling") {
  const Operator jz = build_spin_operator(SpinKind::Jz, 4);
  for (double v : sample_outcomes(StateVector::spin_basis(4, 3), jz, 500, 9)) {
    CHECK(v == Approx(1.0).epsilon(1e-12));
  }

  const Operator N = build_fock_operator(FockKind::Number, 32);
  const auto zeros = sample_outcomes(StateVector::vacuum(32), N, 1000000, 4);
  CHECK(std::accumulate(zeros.begin(), zeros.end(), 0.0) == 0.0);

  const StateVector coh = displaced_squeezed_state(2.0, 0.0, 32);
  const auto counts = sample_outcomes(coh, N, 100000, 12345);
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / 100000.0;
  CHECK(std::abs(mean - 4.0) <= 3.0 * 2.0 / std::sqrt(1e5));
}

TEST_CASE("sampling is deterministic in the seed") {
  const StateVector coh = displaced_squeezed_state(2.0, 0.0, 64);
  const Operator N = build_fock_operator(FockKind::Number, 64);
  CHECK(sample_outcomes(coh, N, 1000, 77) == sample_outcomes(coh, N, 1000, 77));
  CHECK(sample_outcomes(coh, N, 1000, 77) != sample_outcomes(coh, N, 1000, 78));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("inversion of the response curve") {
  const StateVector probe = StateVector::spin_basis(8, 0);
  const Operator jx = build_spin_operator(SpinKind::Jx, 8);
  const Operator H = -build_spin_operator(SpinKind::Jy, 8);
  const ResponseCurve curve = response_curve(probe, jx, H, 0.0);
  CHECK(curve.phi_grid.size() == 2001);
  CHECK(curve.window_lo < 0.0);
  CHECK(curve.window_hi > 0.0);
  for (double phi0 : {0.0, 0.1, -0.37}) {
    const double m = jx.expectation(evolve(probe, H, phi0)).real();
    const std::vector<double> outcomes(10, m);
    CHECK(std::abs(estimate_phi(outcomes, curve) - phi0) <= 1e-10);
  }
  CHECK_THROWS_AS(estimate_phi(std::vector<double>{}, curve), Error);
  try {
    estimate_phi_from_mean(100.0, curve);
    FAIL("expected out-of-range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("working point sits on the steep part of the response") {
  // <Jx> on |j,-j> rotated by -Jy behaves like j sin(phi); the slope peaks at phi = 0.
  const StateVector probe = StateVector::spin_basis(8, 0);
  CHECK(choose_working_point(probe, build_spin_operator(SpinKind::Jx, 8), -build_spin_operator(SpinKind::Jy, 8)) == 0.0);
  // With A = Jz the response is flat at 0; the chosen point moves to |phi| near pi/2.
  const double wp = choose_working_point(probe, build_spin_operator(SpinKind::Jz, 8), -build_spin_operator(SpinKind::Jy, 8));
  CHECK(std::abs(std::abs(wp) - std::numbers::pi / 2.0) <= 0.35);
}

TEST_CASE("spin j=4 Monte-Carlo rmse") {
  const Operator jx = build_spin_operator(SpinKind::Jx, 8);
  const Operator H = -build_spin_operator(SpinKind::Jy, 8);
  const EstimationRun run = run_estimation(StateVector::spin_basis(8, 0), jx, H, 0.1, 10000, 200, 2024);
  CHECK(run.analytic_rmse == Approx(1.0 / std::sqrt(8.0) / 100.0).epsilon(0.02));
  CHECK(run.empirical_rmse == Approx(run.analytic_rmse).epsilon(0.1));
  CHECK(std::abs(run.bias) <= run.empirical_rmse);
  CHECK(run.rejected_trials == 0);
  CHECK(run.estimates.size() == 200);
}

TEST_CASE("position probe rmse follows the lambda = 4 prediction") {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  const EstimationRun run = run_estimation(xp_state(4.0).state, X, P, 0.0, 10000, 200, 99);
  const double predicted = 1.0 / std::sqrt(8.0) / 100.0;
  CHECK(run.analytic_rmse == Approx(predicted).epsilon(1e-6));
  CHECK(run.empirical_rmse == Approx(predicted).epsilon(0.1));
}

TEST_CASE("single shots versus one hundred shots") {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  const StateVector probe = xp_state(9.0).state;
  const EstimationRun one = run_estimation(probe, X, P, 0.0, 1, 2000, 5);
  const EstimationRun hundred = run_estimation(probe, X, P, 0.0, 100, 2000, 6);
  CHECK(one.empirical_rmse / hundred.empirical_rmse == Approx(10.0).epsilon(0.15));
}

TEST_CASE("central limit scaling of the rmse") {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  const StateVector probe = xp_state(4.0).state;
  std::vector<double> shots{100.0, 1000.0, 10000.0};
  std::vector<double> rmse;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    rmse.push_back(run_estimation(probe, X, P, 0.0, static_cast<int>(shots[i]), 200, 40 + i).empirical_rmse);
  }
  CHECK(std::abs(fit_loglog(shots, rmse).slope + 0.5) <= 0.05);
}

TEST_CASE("zero slope probes cannot be inverted") {
  try {
    run_estimation(StateVector::vacuum(32), build_fock_operator(FockKind::X, 32), build_fock_operator(FockKind::Number, 32),
                   0.0, 100, 10, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::UnusableProbe || e.code() == ErrorCode::OutOfRange));
  }
}

TEST_CASE("periodicity gate") {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  // lambda = 1 gives 0.707 per shot, well above 2 pi / 20.
  try {
    run_estimation(xp_state(1.0).state, X, P, 0.0, 1, 10, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Periodicity);
  }
}

TEST_CASE("runs are reproducible") {
  const Operator jx = build_spin_operator(SpinKind::Jx, 8);
  const Operator H = -build_spin_operator(SpinKind::Jy, 8);
  const StateVector probe = StateVector::spin_basis(8, 0);
  const EstimationRun a = run_estimation(probe, jx, H, 0.05, 1000, 20, 31);
  const EstimationRun b = run_estimation(probe, jx, H, 0.05, 1000, 20, 31);
  CHECK(a.estimates == b.estimates);
}

}  // TEST_SUITE
