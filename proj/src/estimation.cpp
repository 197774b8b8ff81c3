// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace squeezelab {

namespace {

constexpr double kSignalFloor = 1e-10;
constexpr double kPhiTolerance = 1e-12;

double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits; identical on every platform.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

/// Exact evaluation of <A>(phi) and its derivative along one probe trajectory.
class ResponseModel {
 public:
  ResponseModel(const StateVector& probe, const Operator& A, const Propagator& propagator)
      : A_(A),
        K_(commutator(propagator.generator(), A)),
        trajectory_(propagator.trajectory(probe.amplitudes())) {}

  double mean(double phi) const {
    const Vector psi = trajectory_.at(phi);
    return psi.dot(A_.apply(psi)).real();
  }

  /// (<A>, -i<[H,A]>) at phi.
  std::pair<double, cplx> mean_and_slope(double phi) const {
    const Vector psi = trajectory_.at(phi);
    const double m = psi.dot(A_.apply(psi)).real();
    const cplx slope = cplx{0.0, -1.0} * psi.dot(K_.apply(psi));
    return {m, slope};
  }

 private:
  Operator A_;
  Operator K_;
  Propagator::Trajectory trajectory_;
};

StateVector evolve(const StateVector& state, const Operator& H, double phi) {
  require_same_space(state.space(), H.space(), "evolve");
  return Propagator(H).evolve(state, phi);
}

DerivativeCheck derivative_identity_check(const StateVector& state, const Operator& A, const Operator& H,
                                          double phi, double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "finite-difference step must be positive");
  }
  require_same_space(state.space(), A.space(), "derivative check A");
  require_same_space(state.space(), H.space(), "derivative check H");
  require_hermitian(A, "A");
  const Propagator propagator(H);
  const ResponseModel model(state, A, propagator);
  const auto [mean, slope] = model.mean_and_slope(phi);
  (void)mean;
  DerivativeCheck out;
  out.analytic = slope.real();
  out.analytic_imag = slope.imag();
  out.numeric = (model.mean(phi + step) - model.mean(phi - step)) / (2.0 * step);
  return out;
}

double analytic_delta_phi(const StateVector& state, const Operator& A, const Operator& H) {
  const MomentReport m = moment_report(state, A, H);
  const double signal = std::abs(m.mean_C);
  if (!(signal > kSignalFloor)) {
    std::ostringstream os;
    os << "|<[A,H]>| = " << signal << ": the probe carries no phase signal";
    throw Error(ErrorCode::UnusableProbe, os.str());
  }
  return m.sd_A() / signal;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a counter offset from the master seed
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Sampling

MeasurementModel::MeasurementModel(const Operator& A) : A_(A), eig_(hermitian_eigensystem(A)) {}

std::vector<double> MeasurementModel::probabilities(const StateVector& state) const {
  require_same_space(A_.space(), state.space(), "measurement");
  const Vector amps = eig_.vectors.adjoint() * state.amplitudes();
  std::vector<double> p(static_cast<std::size_t>(amps.size()));
  for (int k = 0; k < amps.size(); ++k) {
    p[static_cast<std::size_t>(k)] = std::norm(amps(k));
  }
  return p;
}

OutcomeSampler::OutcomeSampler(const Eigen::VectorXd& values, const std::vector<double>& probabilities) {
  if (static_cast<std::size_t>(values.size()) != probabilities.size() || probabilities.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "outcome values and probabilities differ in length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) {
      continue;
    }
    total += probabilities[k];
    values_.push_back(values(static_cast<int>(k)));
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "outcome distribution has no mass");
  }
  for (double& c : cumulative_) {
    c /= total;
  }
  cumulative_.back() = 1.0;
}

double OutcomeSampler::draw(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), values_.size() - 1);
  return values_[idx];
}

std::vector<double> OutcomeSampler::draw(std::mt19937_64& rng, int shots) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(shots, 0)));
  for (double& x : out) {
    x = draw(rng);
  }
  return out;
}

double OutcomeSampler::sample_mean(std::mt19937_64& rng, int shots) const {
  double sum = 0.0;
  for (int s = 0; s < shots; ++s) {
    sum += draw(rng);
  }
  return sum / static_cast<double>(shots);
}

std::vector<double> sample_outcomes(const StateVector& state, const Operator& A, int shots, std::uint64_t seed) {
  if (shots < 1) {
    throw Error(ErrorCode::InvalidParameter, "shots must be >= 1");
  }
  const MeasurementModel model(A);
  const OutcomeSampler sampler(model.eigenvalues(), model.probabilities(state));
  std::mt19937_64 rng(seed);
  return sampler.draw(rng, shots);
}

// ---------------------------------------------------------------------------
// Response curve and inversion

double ResponseCurve::evaluate(double phi) const {
  if (!model) {
    throw Error(ErrorCode::InvalidParameter, "response curve has no model attached");
  }
  return model->mean(phi);
}

namespace {

ResponseCurve build_curve(const StateVector& probe, const Operator& A, const Propagator& propagator,
                          double working_point, const CurveOptions& options) {
  if (options.points < 3 || !(options.half_width > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "response grid needs >= 3 points and a positive half width");
  }
  require_same_space(probe.space(), A.space(), "response curve A");
  require_same_space(probe.space(), propagator.generator().space(), "response curve H");
  require_hermitian(A, "A");

  ResponseCurve c;
  c.working_point = working_point;
  c.model = std::make_shared<ResponseModel>(probe, A, propagator);
  const int n = options.points;
  c.phi_grid.resize(static_cast<std::size_t>(n));
  c.mean_A.resize(static_cast<std::size_t>(n));
  c.derivative.resize(static_cast<std::size_t>(n));
  const double h = 2.0 * options.half_width / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double phi = working_point - options.half_width + h * i;
    const auto [m, slope] = c.model->mean_and_slope(phi);
    c.phi_grid[static_cast<std::size_t>(i)] = phi;
    c.mean_A[static_cast<std::size_t>(i)] = m;
    c.derivative[static_cast<std::size_t>(i)] = slope.real();
  }

  // Widest strictly monotone run through the grid point nearest the working point.
  const int centre = (n - 1) / 2;
  const auto& y = c.mean_A;
  auto step_sign = [&](int i) { return sign_of(y[static_cast<std::size_t>(i + 1)] - y[static_cast<std::size_t>(i)]); };
  int direction = sign_of(c.derivative[static_cast<std::size_t>(centre)]);
  if (direction == 0) {
    direction = step_sign(centre);
  }
  int lo = centre;
  int hi = centre;
  if (direction != 0) {
    while (hi + 1 < n && step_sign(hi) == direction) ++hi;
    while (lo > 0 && step_sign(lo - 1) == direction) --lo;
  }
  c.window_lo_index = lo;
  c.window_hi_index = hi;
  c.window_lo = c.phi_grid[static_cast<std::size_t>(lo)];
  c.window_hi = c.phi_grid[static_cast<std::size_t>(hi)];
  return c;
}

}  // namespace

ResponseCurve response_curve(const StateVector& probe, const Operator& A, const Operator& H, double working_point,
                             const CurveOptions& options) {
  return build_curve(probe, A, Propagator(H), working_point, options);
}

double estimate_phi_from_mean(double sample_mean, const ResponseCurve& curve) {
  const int lo = curve.window_lo_index;
  const int hi = curve.window_hi_index;
  if (hi <= lo) {
    throw Error(ErrorCode::OutOfRange, "response curve has no monotone window around the working point");
  }
  const auto& y = curve.mean_A;
  const double y_lo = y[static_cast<std::size_t>(lo)];
  const double y_hi = y[static_cast<std::size_t>(hi)];
  const bool increasing = y_hi > y_lo;
  const double y_min = std::min(y_lo, y_hi);
  const double y_max = std::max(y_lo, y_hi);
  if (!(sample_mean >= y_min && sample_mean <= y_max)) {
    std::ostringstream os;
    os << "sample mean " << sample_mean << " lies outside the response range [" << y_min << ", " << y_max << "]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }

  // Grid bracket, then bisection on the exact curve.
  int a = lo;
  int b = hi;
  while (b - a > 1) {
    const int mid = (a + b) / 2;
    const double ym = y[static_cast<std::size_t>(mid)];
    if ((ym <= sample_mean) == increasing) {
      a = mid;
    } else {
      b = mid;
    }
  }
  double phi_a = curve.phi_grid[static_cast<std::size_t>(a)];
  double phi_b = curve.phi_grid[static_cast<std::size_t>(b)];
  double f_a = y[static_cast<std::size_t>(a)] - sample_mean;
  if (f_a == 0.0) {
    return phi_a;
  }
  if (y[static_cast<std::size_t>(b)] - sample_mean == 0.0) {
    return phi_b;
  }
  for (int iter = 0; iter < 200 && phi_b - phi_a > kPhiTolerance; ++iter) {
    const double mid = 0.5 * (phi_a + phi_b);
    const double f_mid = curve.evaluate(mid) - sample_mean;
    if (f_mid == 0.0) {
      return mid;
    }
    if (sign_of(f_mid) == sign_of(f_a)) {
      phi_a = mid;
      f_a = f_mid;
    } else {
      phi_b = mid;
    }
  }
  return 0.5 * (phi_a + phi_b);
}

double estimate_phi(std::span<const double> outcomes, const ResponseCurve& curve) {
  if (outcomes.empty()) {
    throw Error(ErrorCode::InvalidParameter, "cannot estimate from an empty outcome vector");
  }
  const double mean = std::accumulate(outcomes.begin(), outcomes.end(), 0.0) / static_cast<double>(outcomes.size());
  return estimate_phi_from_mean(mean, curve);
}

double choose_working_point(const StateVector& probe, const Operator& A, const Operator& H, double preferred,
                            const CurveOptions& options) {
  CurveOptions coarse = options;
  coarse.points = std::min(options.points, 401);
  const ResponseCurve c = response_curve(probe, A, H, preferred, coarse);
  double best = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < c.derivative.size(); ++i) {
    const double s = std::abs(c.derivative[i]);
    // first maximum wins; nearest-to-centre preference is applied below
    if (s > best) {
      best = s;
      best_index = i;
    }
  }
  const std::size_t centre = (c.derivative.size() - 1) / 2;
  if (std::abs(c.derivative[centre]) >= 0.95 * best) {
    return preferred;
  }
  // Among points within 5% of the maximum, take the one closest to the preferred point.
  std::size_t pick = best_index;
  for (std::size_t i = 0; i < c.derivative.size(); ++i) {
    const auto dist = [&](std::size_t k) { return std::abs(static_cast<long>(k) - static_cast<long>(centre)); };
    if (std::abs(c.derivative[i]) >= 0.95 * best && dist(i) < dist(pick)) {
      pick = i;
    }
  }
  return c.phi_grid[pick];
}

EstimationRun run_estimation(const StateVector& probe, const Operator& A, const Operator& H, double phi_true,
                             int shots, int trials, std::uint64_t seed, const EstimationOptions& options) {
  if (shots < 1 || trials < 1) {
    throw Error(ErrorCode::InvalidParameter, "shots and trials must be >= 1");
  }
  require_same_space(probe.space(), A.space(), "run_estimation A");
  require_same_space(probe.space(), H.space(), "run_estimation H");
  const Propagator propagator(H);
  const StateVector encoded = propagator.evolve(probe, phi_true);

  EstimationRun run;
  run.phi_true = phi_true;
  run.shots = shots;
  run.trials = trials;
  run.seed = seed;
  run.analytic_delta_phi = analytic_delta_phi(encoded, A, H);
  run.analytic_rmse = run.analytic_delta_phi / std::sqrt(static_cast<double>(shots));
  if (!(run.analytic_rmse < options.periodicity_limit)) {
    std::ostringstream os;
    os << "analytic rmse " << run.analytic_rmse << " is not small against the phase period (limit "
       << options.periodicity_limit << ")";
    throw Error(ErrorCode::Periodicity, os.str());
  }

  const ResponseCurve curve = build_curve(probe, A, propagator, phi_true, options.curve);
  run.window_lo = curve.window_lo;
  run.window_hi = curve.window_hi;
  const MeasurementModel measurement(A);
  const OutcomeSampler sampler(measurement.eigenvalues(), measurement.probabilities(encoded));

  run.estimates.reserve(static_cast<std::size_t>(trials));
  double sum_sq = 0.0;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double mean = sampler.sample_mean(rng, shots);
    try {
      const double est = estimate_phi_from_mean(mean, curve);
      run.estimates.push_back(est);
      sum += est - phi_true;
      sum_sq += (est - phi_true) * (est - phi_true);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfRange) {
        throw;
      }
      ++run.rejected_trials;
    }
  }
  if (run.estimates.empty()) {
    throw Error(ErrorCode::OutOfRange, "every trial fell outside the invertible response window");
  }
  const double n = static_cast<double>(run.estimates.size());
  run.empirical_rmse = std::sqrt(sum_sq / n);
  run.bias = sum / n;
  return run;
}

}  // namespace squeezelab
