// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "squeezelab/io.hpp"
#include "squeezelab/spectral.hpp"

namespace squeezelab {

namespace {

constexpr double kStateAcceptTol = 1e-8;
constexpr double kSignalFloor = 1e-10;

/// Builds with the requested truncation, or doubles from the default until
/// the tail gate passes.
template <class Build>
auto with_auto_dim(const ScenarioConfig& config, Build&& build) -> decltype(build(0)) {
  if (config.dim) {
    return build(*config.dim);
  }
  int dim = config.default_dim;
  for (;;) {
    try {
      return build(dim);
    } catch (const TruncationError&) {
      if (2 * dim > kMaxAutoDim) {
        throw;
      }
      dim *= 2;
    }
  }
}

void add_bound_margin(ScenarioResult& r, const std::string& tag, double dphi, const StrategyProfile& profile,
                      const BoundConstants& constants) {
  try {
    const double bound = heisenberg_lower_bound(profile, 1, constants);
    r.metrics["bound_" + tag] = bound;
    r.metrics["bound_margin_" + tag] = dphi / (0.5 * bound);
  } catch (const Error&) {
    r.notes.push_back("bound_skipped_" + tag);
  }
}

void add_monte_carlo(ScenarioResult& r, std::optional<EstimationRun>& slot, const std::string& tag,
                     const Probe& probe, double phi, std::uint64_t seed, int shots, int trials, bool enabled) {
  if (!enabled) {
    r.notes.push_back("mc_skipped_" + tag + "=disabled");
    return;
  }
  if (probe.state.dimension() > kMonteCarloDimLimit) {
    r.notes.push_back("mc_skipped_" + tag + "=dim");
    return;
  }
  try {
    slot = run_estimation(probe.state, probe.A, probe.H, phi, shots, trials, seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Periodicity) {
      r.notes.push_back("mc_skipped_" + tag + "=periodicity");
      return;
    }
    if (e.code() == ErrorCode::OutOfRange) {
      r.notes.push_back("mc_skipped_" + tag + "=out_of_range");
      return;
    }
    throw;
  }
  if (slot->rejected_trials > 0) {
    r.notes.push_back("mc_rejected_" + tag + "=" + std::to_string(slot->rejected_trials));
  }
  r.metrics["mc_rmse_" + tag] = slot->empirical_rmse;
  r.metrics["mc_rmse_over_analytic_" + tag] = slot->empirical_rmse / slot->analytic_rmse;
}

void record_gain(ScenarioResult& r, const GainReport& g, const BoundConstants& constants) {
  r.gain = g;
  r.notes.push_back(std::string("rule=") + std::string(to_string(g.probe_count_rule)));
  r.notes.push_back(std::string("branch=") + std::string(to_string(g.branch)));
  r.notes.push_back(std::string("sq_class=") + std::string(to_string(g.sq_profile.classification)));
  r.notes.push_back(std::string("cl_class=") + std::string(to_string(g.cl_profile.classification)));
  r.metrics["dphi_sq"] = g.delta_phi_sq;
  r.metrics["dphi_cl"] = g.delta_phi_cl;
  r.metrics["ratio_times_n"] = g.ratio * g.n_probes;
  add_bound_margin(r, "sq", g.delta_phi_sq, g.sq_profile, constants);
  if (g.branch == GainBranch::ErrorPropagation) {
    add_bound_margin(r, "cl", g.delta_phi_cl, g.cl_profile, constants);
  }
}

/// Lowest-|z| usable eigenstate of L(lambda) for (X, P), shifted along P so
/// that <P> = dP.
struct PositionProbe {
  StateVector state;
  IntelligentState source;
};

PositionProbe position_probe(double lambda, const Operator& X, const Operator& P) {
  std::vector<IntelligentState> states;
  try {
    states = solve_intelligent_states(X, P, lambda, kStateAcceptTol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyResult) throw;
    throw TruncationError(e.what(), 1.0, 2 * X.dimension());
  }
  const auto it = std::find_if(states.begin(), states.end(), [](const IntelligentState& s) { return s.usable; });
  if (it == states.end()) {
    throw Error(ErrorCode::UnusableProbe, "no usable intelligent state for (X, P)");
  }
  const double shift = it->moments.sd_H() - it->moments.mean_H;
  StateVector shifted = Propagator(X).evolve(it->state, shift);
  shifted.require_trusted();
  return {shifted, *it};
}

ScenarioResult base_result(Family family, std::string name, double param) {
  ScenarioResult r;
  r.family = family;
  r.param_name = std::move(name);
  r.param = param;
  return r;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Position: return "position";
    case Family::SGPhase: return "sg";
    case Family::QuadraturePhase: return "quadrature";
    case Family::SpinRotation: return "spin";
    case Family::Custom: return "custom";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::Position, Family::SGPhase, Family::QuadraturePhase, Family::SpinRotation, Family::Custom}) {
    if (name == to_string(f)) {
      return f;
    }
  }
  throw Error(ErrorCode::Parse, "unknown family '" + std::string(name) +
                                    "' (expected position, sg, quadrature, spin or custom)");
}

void ScenarioConfig::validate() const {
  constants.validate();
  if (shots < 1 || trials < 1) {
    throw Error(ErrorCode::InvalidParameter, "shots and trials must be >= 1");
  }
  if (dim && *dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "dim must be >= 2");
  }
  if (default_dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "default dim must be >= 2");
  }
  switch (family) {
    case Family::Position:
      if (!(lambda >= 1.0)) throw Error(ErrorCode::Regime, "position scenario needs lambda >= 1");
      break;
    case Family::SGPhase:
      if (!(alpha_mag >= 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha must be >= 0");
      break;
    case Family::QuadraturePhase:
      if (!(xi > 0.0)) throw Error(ErrorCode::InvalidParameter, "xi must be > 0");
      if (alpha_sq && !(*alpha_sq > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha_sq must be > 0");
      if (!(alpha_cl > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha_cl must be > 0");
      break;
    case Family::SpinRotation:
      if (two_j < 8) throw Error(ErrorCode::InvalidParameter, "spin scenario needs two_j >= 8");
      break;
    case Family::Custom:
      if (a_path.empty() || h_path.empty()) {
        throw Error(ErrorCode::InvalidParameter, "custom scenario needs operator files for A and H");
      }
      break;
  }
}

double ScenarioResult::metric(const std::string& key) const {
  const auto it = metrics.find(key);
  if (it == metrics.end()) {
    throw Error(ErrorCode::InvalidParameter, "result has no metric '" + key + "'");
  }
  return it->second;
}

bool ScenarioResult::has_note(const std::string& prefix) const {
  return std::any_of(notes.begin(), notes.end(), [&](const std::string& n) { return n.rfind(prefix, 0) == 0; });
}

// ---------------------------------------------------------------------------

ScenarioResult run_position(double lambda, const ScenarioConfig& config) {
  ScenarioConfig c = config;
  c.family = Family::Position;
  c.lambda = lambda;
  c.validate();
  ScenarioResult r = base_result(Family::Position, "lambda", lambda);

  struct Built {
    int dim;
    PositionProbe sq;
    PositionProbe cl;
  };
  const Built b = with_auto_dim(c, [&](int dim) {
    const Operator X = build_fock_operator(FockKind::X, dim);
    const Operator P = build_fock_operator(FockKind::P, dim);
    return Built{dim, position_probe(lambda, X, P), position_probe(1.0, X, P)};
  });
  r.dim = b.dim;
  const Operator X = build_fock_operator(FockKind::X, b.dim);
  const Operator P = build_fock_operator(FockKind::P, b.dim);
  const Probe sq{b.sq.state, X, P};
  const Probe cl{b.cl.state, X, P};

  GainOptions opts;
  opts.ground = GroundConvention::ZeroOverride;
  record_gain(r, gain_report(sq, cl, c.constants, opts), c.constants);
  r.notes.push_back("ground=zero_override");
  r.metrics["tail_sq"] = sq.state.tail_weight();
  r.metrics["tail_cl"] = cl.state.tail_weight();
  r.metrics["trifonov_sq"] = b.sq.source.max_trifonov_residual();
  r.metrics["residual_sq"] = b.sq.source.residual;

  add_monte_carlo(r, r.sq_run, "sq", sq, 0.0, derive_seed(c.seed, 0), c.shots, c.trials, c.monte_carlo);
  add_monte_carlo(r, r.cl_run, "cl", cl, 0.0, derive_seed(c.seed, 1), c.shots, c.trials, c.monte_carlo);
  return r;
}

ScenarioResult run_sg_phase(double alpha_mag, const ScenarioConfig& config) {
  ScenarioConfig c = config;
  c.family = Family::SGPhase;
  c.alpha_mag = alpha_mag;
  c.validate();
  ScenarioResult r = base_result(Family::SGPhase, "alpha", alpha_mag);

  struct Built {
    int dim;
    StateVector state;
    StateVector rotated;
  };
  const Built b = with_auto_dim(c, [&](int dim) {
    return Built{dim, displaced_squeezed_state(alpha_mag, 0.0, dim),
                 displaced_squeezed_state(std::polar(alpha_mag, c.identity_phase), 0.0, dim)};
  });
  r.dim = b.dim;
  const Operator N = build_fock_operator(FockKind::Number, b.dim);
  const Operator Cs = build_fock_operator(FockKind::Cosine, b.dim);
  const Operator Sn = build_fock_operator(FockKind::Sine, b.dim);
  const Probe probe{b.state, Sn, N};

  const SgurReport sg = check_sgur(b.state);
  r.metrics["sgur_slack_C"] = sg.slack_C;
  r.metrics["sgur_slack_S"] = sg.slack_S;
  r.metrics["mean_n"] = sg.mean_N;

  const double dphi = analytic_delta_phi(b.state, Sn, N);
  r.metrics["dphi_cl"] = dphi;
  r.metrics["dphi_sqrt_n"] = dphi * std::sqrt(sg.mean_N);
  r.metrics["two_dphi_sqrt_n"] = 2.0 * dphi * std::sqrt(sg.mean_N);
  r.metrics["tail_cl"] = b.state.tail_weight();

  // dS/|<C>| against dC/|<S>| away from the real axis, where both are defined.
  const MomentReport mc = moment_report(b.rotated, Cs, N);
  const MomentReport ms = moment_report(b.rotated, Sn, N);
  const double mean_cos = Cs.expectation(b.rotated).real();
  const double mean_sin = Sn.expectation(b.rotated).real();
  if (std::abs(mean_cos) > kSignalFloor && std::abs(mean_sin) > kSignalFloor) {
    const double via_s = ms.sd_A() / std::abs(mean_cos);
    const double via_c = mc.sd_A() / std::abs(mean_sin);
    r.metrics["dphi_via_S"] = via_s;
    r.metrics["dphi_via_C"] = via_c;
    r.metrics["identity_rel_diff"] = std::abs(via_s - via_c) / std::max(via_s, via_c);
  } else {
    r.notes.push_back("identity_skipped=zero_mean");
  }

  const StrategyProfile profile = classify_strategy(b.state, N, 0.0, c.constants);
  r.notes.push_back(std::string("cl_class=") + std::string(to_string(profile.classification)));
  add_bound_margin(r, "cl", dphi, profile, c.constants);
  r.notes.push_back("no_squeezed_branch");
  add_monte_carlo(r, r.cl_run, "cl", probe, 0.0, derive_seed(c.seed, 1), c.shots, c.trials, c.monte_carlo);
  return r;
}

ScenarioResult run_quadrature_phase(double xi, std::optional<double> alpha_sq, const ScenarioConfig& config) {
  ScenarioConfig c = config;
  c.family = Family::QuadraturePhase;
  c.xi = xi;
  c.alpha_sq = alpha_sq;
  c.validate();
  const double a_sq = alpha_sq.value_or(std::exp(xi) / std::sqrt(2.0));
  ScenarioResult r = base_result(Family::QuadraturePhase, "xi", xi);
  r.metrics["alpha_sq"] = a_sq;
  r.metrics["alpha_cl"] = c.alpha_cl;
  if (!alpha_sq) {
    r.notes.push_back("split=balanced");
  }

  const StateVector sq_state = with_auto_dim(c, [&](int dim) { return displaced_squeezed_state(a_sq, xi, dim); });
  const StateVector cl_state =
      with_auto_dim(c, [&](int dim) { return displaced_squeezed_state(c.alpha_cl, 0.0, dim); });
  r.dim = sq_state.dimension();
  r.metrics["dim_cl"] = cl_state.dimension();

  const Probe sq{sq_state, build_fock_operator(FockKind::P, sq_state.dimension()),
                 build_fock_operator(FockKind::Number, sq_state.dimension())};
  const Probe cl{cl_state, build_fock_operator(FockKind::P, cl_state.dimension()),
                 build_fock_operator(FockKind::Number, cl_state.dimension())};
  record_gain(r, gain_report(sq, cl, c.constants), c.constants);
  const double sh = std::sinh(xi);
  r.metrics["energy_closed_form"] = a_sq * a_sq + sh * sh;
  r.metrics["tail_sq"] = sq_state.tail_weight();
  r.metrics["tail_cl"] = cl_state.tail_weight();

  add_monte_carlo(r, r.sq_run, "sq", sq, 0.0, derive_seed(c.seed, 0), c.shots, c.trials, c.monte_carlo);
  add_monte_carlo(r, r.cl_run, "cl", cl, 0.0, derive_seed(c.seed, 1), c.shots, c.trials, c.monte_carlo);
  return r;
}

ScenarioResult run_spin(int two_j, const ScenarioConfig& config) {
  ScenarioConfig c = config;
  c.family = Family::SpinRotation;
  c.two_j = two_j;
  c.validate();
  ScenarioResult r = base_result(Family::SpinRotation, "two_j", two_j);
  r.dim = two_j + 1;
  const double j = 0.5 * two_j;

  const Operator Jx = build_spin_operator(SpinKind::Jx, two_j);
  const Operator H = -build_spin_operator(SpinKind::Jy, two_j);
  const SpinSearchResult search = spin_squeezed_search(two_j, default_spin_lambda_grid(two_j), c.constants);
  const Probe sq{search.best.state, Jx, H};
  const Probe cl{su2_coherent_state(two_j, 0.0, 0.0), Jx, H};

  // Spin coherent states carry too much energy for the energy-ratio count.
  GainOptions opts;
  opts.forced_rule = ProbeCountRule::EnergyOverClassicalSd;
  const GainReport g = gain_report(sq, cl, c.constants, opts);
  record_gain(r, g, c.constants);
  r.notes.push_back("rule_forced");
  r.metrics["j"] = j;
  r.metrics["lambda_sq"] = search.best.lambda.lambda.real();
  r.metrics["trifonov_sq"] = search.best.max_trifonov_residual();
  r.metrics["dphi_cl_closed_form"] = 1.0 / std::sqrt(2.0 * j);
  r.metrics["n_closed_form"] = std::sqrt(2.0 * j);
  r.metrics["two_over_n"] = 2.0 / g.n_probes;
  r.metrics["ratio_over_two_over_n"] = g.ratio / (2.0 / g.n_probes);

  add_monte_carlo(r, r.sq_run, "sq", sq, 0.0, derive_seed(c.seed, 0), c.shots, c.trials, c.monte_carlo);
  add_monte_carlo(r, r.cl_run, "cl", cl, 0.0, derive_seed(c.seed, 1), c.shots, c.trials, c.monte_carlo);
  return r;
}

// ---------------------------------------------------------------------------
// Designer

std::vector<double> default_design_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 32; ++k) {
    grid.push_back(std::pow(2.0, 0.25 * k));
  }
  return grid;
}

namespace {

struct Candidate {
  IntelligentState state;
  StrategyProfile profile;
  double delta_phi;
};

/// Raw eigenstates of L(lambda) plus the lowest-|z| one moved to <H> - E0 = zeta dH.
std::vector<Candidate> candidates_at(const Operator& A, const Operator& H, double lambda, double ground,
                                     const BoundConstants& constants, double accept_tol) {
  std::vector<IntelligentState> states;
  try {
    states = solve_intelligent_states(A, H, lambda, accept_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyResult) return {};
    throw;
  }
  std::vector<IntelligentState> pool;
  for (const auto& s : states) {
    if (s.usable) pool.push_back(s);
  }
  if (!pool.empty()) {
    const IntelligentState& first = pool.front();
    const double shift = ground + constants.zeta() * first.moments.sd_H() - first.moments.mean_H;
    if (std::abs(shift) > 1e-9) {
      const cplx target = first.eigenvalue + cplx{0.0, shift};
      if (auto moved = solve_intelligent_state_at(A, H, lambda, target, accept_tol); moved && moved->usable) {
        pool.push_back(*moved);
      }
    }
  }
  std::vector<Candidate> out;
  for (auto& s : pool) {
    StrategyProfile profile;
    try {
      profile = classify_strategy(s.state, H, ground, constants);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateProbe || e.code() == ErrorCode::InvalidParameter) continue;
      throw;
    }
    const double dphi = s.moments.sd_A() / std::abs(s.moments.mean_C);
    out.push_back({std::move(s), profile, dphi});
  }
  return out;
}

}  // namespace

ScenarioResult design_protocol(const Operator& A, const Operator& H, double energy_budget,
                               const BoundConstants& constants, const std::vector<double>& lambda_grid,
                               const DesignOptions& options) {
  constants.validate();
  require_same_space(A.space(), H.space(), "design");
  require_hermitian(A, "A");
  require_hermitian(H, "H");
  if (lambda_grid.empty()) {
    throw Error(ErrorCode::InvalidParameter, "lambda grid is empty");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0)) throw Error(ErrorCode::Regime, "design grid values must be > 0");
  }
  const double ground = ground_energy(H, options.ground);
  if (!(energy_budget > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "energy budget above ground must be > 0");
  }

  ScenarioResult r = base_result(Family::Custom, "budget", energy_budget);
  r.dim = A.dimension();
  const double tie = 1e-9 * std::max(1.0, energy_budget);

  std::optional<Candidate> best;
  int feasible = 0;
  double min_required = std::numeric_limits<double>::infinity();
  for (double l : lambda_grid) {
    for (Candidate& cand : candidates_at(A, H, l, ground, constants, options.accept_tol)) {
      if (cand.profile.classification != Strategy::Good) continue;
      const double e = cand.profile.energy_above_ground();
      min_required = std::min(min_required, e);
      if (e > energy_budget + tie) continue;
      ++feasible;
      if (!best) {
        best = std::move(cand);
        continue;
      }
      const double gap = energy_budget - e;
      const double best_gap = energy_budget - best->profile.energy_above_ground();
      const bool better = gap < best_gap - tie || (std::abs(gap - best_gap) <= tie && cand.delta_phi < best->delta_phi);
      if (better) best = std::move(cand);
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "no Good intelligent state fits the energy budget " << energy_budget;
    if (std::isfinite(min_required)) {
      os << " (least energetic Good state needs " << min_required << ")";
    } else {
      os << " (no Good state on the grid)";
    }
    throw Error(ErrorCode::Infeasible, os.str());
  }

  // Classical reference among |lambda| = 1 states: prefer Good, then the smallest dphi.
  std::vector<Candidate> classical = candidates_at(A, H, 1.0, ground, constants, options.accept_tol);
  if (classical.empty()) {
    throw Error(ErrorCode::Infeasible, "no usable |lambda| = 1 reference state");
  }
  const bool any_good = std::any_of(classical.begin(), classical.end(),
                                    [](const Candidate& c) { return c.profile.classification == Strategy::Good; });
  const auto rank = [&](const Candidate& c) {
    return std::make_pair(any_good && c.profile.classification != Strategy::Good ? 1 : 0, c.delta_phi);
  };
  const Candidate& ref = *std::min_element(classical.begin(), classical.end(),
                                           [&](const Candidate& a, const Candidate& b) { return rank(a) < rank(b); });
  if (!any_good) {
    r.notes.push_back("cl_reference=not_good");
  }

  const Probe sq{best->state.state, A, H};
  const Probe cl{ref.state.state, A, H};
  GainOptions gopts;
  gopts.ground = options.ground;
  record_gain(r, gain_report(sq, cl, constants, gopts), constants);
  r.metrics["lambda_sq"] = best->state.lambda.lambda.real();
  r.metrics["energy_sq"] = best->profile.energy_above_ground();
  r.metrics["trifonov_sq"] = best->state.max_trifonov_residual();
  r.metrics["residual_sq"] = best->state.residual;
  r.metrics["tail_sq"] = best->state.state.tail_weight();
  r.metrics["feasible_candidates"] = feasible;

  if (options.monte_carlo && A.dimension() <= kMonteCarloDimLimit) {
    const double wp = choose_working_point(sq.state, A, H, 0.0);
    r.metrics["working_point"] = wp;
    add_monte_carlo(r, r.sq_run, "sq", sq, wp, derive_seed(options.seed, 0), options.shots, options.trials, true);
  } else {
    add_monte_carlo(r, r.sq_run, "sq", sq, 0.0, derive_seed(options.seed, 0), options.shots, options.trials,
                    options.monte_carlo);
  }
  return r;
}

// ---------------------------------------------------------------------------

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  switch (config.family) {
    case Family::Position: return run_position(config.lambda, config);
    case Family::SGPhase: return run_sg_phase(config.alpha_mag, config);
    case Family::QuadraturePhase: return run_quadrature_phase(config.xi, config.alpha_sq, config);
    case Family::SpinRotation: return run_spin(config.two_j, config);
    case Family::Custom: {
      const Operator A = load_operator(config.a_path);
      const Operator H = load_operator(config.h_path);
      DesignOptions opts;
      opts.ground = config.ground;
      opts.seed = config.seed;
      opts.shots = config.shots;
      opts.trials = config.trials;
      opts.monte_carlo = config.monte_carlo;
      const std::vector<double> grid = config.lambda_grid.empty() ? default_design_grid() : config.lambda_grid;
      return design_protocol(A, H, config.energy_budget, config.constants, grid, opts);
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family");
}

SweepResult run_sweep(const ScenarioConfig& config, const std::vector<double>& params, int jobs) {
  if (params.empty()) {
    throw Error(ErrorCode::InvalidParameter, "sweep needs at least one parameter value");
  }
  SweepResult out;
  out.family = config.family;
  std::vector<std::optional<ScenarioResult>> slots(params.size());
  std::vector<std::exception_ptr> errors(params.size());

  auto run_point = [&](std::size_t i) {
    ScenarioConfig c = config;
    c.seed = derive_seed(config.seed, i);
    const double p = params[i];
    switch (c.family) {
      case Family::Position: c.lambda = p; break;
      case Family::SGPhase: c.alpha_mag = p; break;
      case Family::QuadraturePhase: c.xi = p; break;
      case Family::SpinRotation:
        if (p != std::floor(p)) throw Error(ErrorCode::InvalidParameter, "two_j must be an integer");
        c.two_j = static_cast<int>(p);
        break;
      case Family::Custom: c.energy_budget = p; break;
    }
    slots[i] = run_scenario(c);
  };

  const int workers = std::clamp(jobs, 1, static_cast<int>(params.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < params.size(); i = next++) {
      try {
        run_point(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.points.push_back(std::move(*slots[i]));
  }

  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : out.points) {
    switch (out.family) {
      case Family::Position:
      case Family::QuadraturePhase:
      case Family::Custom:
        if (p.gain) {
          x.push_back(p.gain->n_probes);
          y.push_back(p.gain->ratio);
          out.fit_label = "log ratio vs log N";
        }
        break;
      case Family::SpinRotation:
        x.push_back(p.metric("j"));
        y.push_back(p.metric("dphi_sq"));
        out.fit_label = "log dphi_sq vs log j";
        break;
      case Family::SGPhase:
        x.push_back(p.metric("mean_n"));
        y.push_back(p.metric("dphi_cl"));
        out.fit_label = "log dphi_cl vs log mean_n";
        break;
    }
  }
  if (x.size() >= 2) {
    try {
      out.fit = fit_loglog(x, y);
    } catch (const Error&) {
      out.fit.reset();
    }
  }
  return out;
}

}  // namespace squeezelab
