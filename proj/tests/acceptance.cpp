// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "squeezelab/cli.hpp"
#include "squeezelab/estimation.hpp"
#include "squeezelab/intelligent.hpp"
#include "squeezelab/scenarios.hpp"
#include "squeezelab/stats.hpp"
#include "support.hpp"

using namespace squeezelab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Bound margins of every probe evaluated by the scenario criteria.
std::vector<std::pair<std::string, double>> g_margins;

void collect_margins(const ScenarioResult& r) {
  for (const char* key : {"bound_margin_sq", "bound_margin_cl"}) {
    if (auto it = r.metrics.find(key); it != r.metrics.end()) {
      std::ostringstream name;
      name << to_string(r.family) << "(" << r.param << ")." << key;
      g_margins.emplace_back(name.str(), it->second);
    }
  }
}

ScenarioConfig analytic_only() {
  ScenarioConfig c;
  c.monte_carlo = false;
  return c;
}

void criterion_1(Verdict& v) {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  double worst = 0.0;
  std::size_t states = 0;
  for (cplx l : {cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{4.0, 0.0}, cplx{9.0, 0.0}, cplx{1.0, 1.0}}) {
    for (const IntelligentState& s : solve_intelligent_states(X, P, l)) {
      worst = std::max(worst, s.max_trifonov_residual());
      ++states;
    }
  }
  v.detail << "states=" << states << " worst_residual=" << worst;
  v.require(worst <= 1e-6, "moment residual <= 1e-6");
}

void criterion_2(Verdict& v) {
  std::mt19937_64 rng(20260401);
  double worst = std::numeric_limits<double>::infinity();
  const Operator X = build_fock_operator(FockKind::X, 32);
  const Operator P = build_fock_operator(FockKind::P, 32);
  const HilbertSpec fock = HilbertSpec::fock(32);
  const HilbertSpec spin = HilbertSpec::spin(32);
  const Operator jx = build_spin_operator(SpinKind::Jx, 32);
  const Operator jy = build_spin_operator(SpinKind::Jy, 32);
  for (int k = 0; k < 1000; ++k) {
    const StateVector f = testing::random_state(rng, fock);
    worst = std::min(worst, moment_report(f, X, P).schrodinger_slack);
    worst = std::min(worst, moment_report(f, testing::random_hermitian(rng, fock), testing::random_hermitian(rng, fock))
                                .schrodinger_slack);
    const StateVector s = testing::random_state(rng, spin);
    worst = std::min(worst, moment_report(s, jx, jy).schrodinger_slack);
    worst = std::min(worst, moment_report(s, testing::random_hermitian(rng, spin), testing::random_hermitian(rng, spin))
                                .schrodinger_slack);
  }
  double worst_sg = std::numeric_limits<double>::infinity();
  for (double a : {2.0, 4.0, 6.0}) {
    const SgurReport r = check_sgur(displaced_squeezed_state(a, 0.0, 256));
    worst_sg = std::min({worst_sg, r.slack_C, r.slack_S});
  }
  v.detail << "min_schrodinger_slack=" << worst << " min_sgur_slack=" << worst_sg;
  v.require(worst >= -1e-10, "Schrodinger slack >= -1e-10");
  v.require(worst_sg >= -1e-8, "SG slack >= -1e-8");
}

void criterion_3(Verdict& v) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const HilbertSpec s = k % 2 ? HilbertSpec::spin(8) : HilbertSpec::fock(24);
    const DerivativeCheck d =
        derivative_identity_check(testing::random_state(rng, s), testing::random_hermitian(rng, s),
                                  testing::random_hermitian(rng, s), u(rng), 1e-4);
    worst = std::max(worst, std::abs(d.analytic - d.numeric) / std::max(1.0, std::abs(d.analytic)));
  }
  v.detail << "tuples=100 worst_rel_err=" << worst;
  v.require(worst <= 1e-4, "relative error <= 1e-4");
}

void criterion_4(Verdict& v) {
  ScenarioConfig c = analytic_only();
  c.family = Family::Position;
  const SweepResult s = run_sweep(c, {4.0, 9.0, 16.0, 25.0}, 4);
  for (const ScenarioResult& r : s.points) {
    collect_margins(r);
    const double rn = r.metric("ratio_times_n");
    v.detail << "lambda=" << r.param << ":ratio*N=" << rn << " ";
    v.require(std::abs(rn - 1.0) <= 0.05, "ratio*N = 1 +- 5%");
  }
  v.detail << "slope=" << s.fit->slope;
  v.require(std::abs(s.fit->slope + 1.0) <= 0.05, "slope -1 +- 0.05");
}

void criterion_5(Verdict& v) {
  ScenarioConfig c = analytic_only();
  c.family = Family::QuadraturePhase;
  const SweepResult s = run_sweep(c, {1.5, 2.0, 2.5, 3.0}, 4);
  for (const ScenarioResult& r : s.points) {
    collect_margins(r);
    const double rn = r.metric("ratio_times_n");
    v.detail << "xi=" << r.param << ":ratio*N=" << rn << " ";
    v.require(rn >= 1.0 && rn <= 2.0, "ratio*N in [1, 2]");
    for (double scale : {0.1, 2.0}) {
      const ScenarioResult u = run_quadrature_phase(r.param, scale * std::exp(r.param), c);
      collect_margins(u);
      v.require(u.metric("ratio_times_n") > rn, "unbalanced split strictly worse");
    }
  }
  v.detail << "slope=" << s.fit->slope;
  v.require(std::abs(s.fit->slope + 1.0) <= 0.05, "slope -1 +- 0.05");
}

void criterion_6(Verdict& v) {
  ScenarioConfig c = analytic_only();
  c.family = Family::SpinRotation;
  const SweepResult s = run_sweep(c, {8.0, 16.0, 32.0, 64.0}, 4);
  for (const ScenarioResult& r : s.points) {
    collect_margins(r);
    const double j = 0.5 * r.param;
    const double cl_err = std::abs(r.gain->delta_phi_cl - 1.0 / std::sqrt(2.0 * j));
    const double n_err = std::abs(r.gain->n_probes - std::sqrt(2.0 * j));
    const double ratio_limit = 1.5 * 2.0 / r.gain->n_probes;
    v.detail << "j=" << j << ":dphi_sq=" << r.metric("dphi_sq") << ",ratio/(2/N)=" << r.metric("ratio_over_two_over_n")
             << " ";
    v.require(cl_err <= 1e-9, "classical dphi = 1/sqrt(2j)");
    v.require(n_err <= 1e-9, "N = sqrt(2j)");
    v.require(r.gain->ratio <= ratio_limit, "ratio <= 1.5 (2/N)");
  }
  v.detail << "slope=" << s.fit->slope;
  v.require(std::abs(s.fit->slope + 1.0) <= 0.1, "slope -1 +- 0.1");
}

void check_mc(Verdict& v, const ScenarioResult& r, const std::string& tag) {
  const std::string key = "mc_rmse_over_analytic_" + tag;
  const auto it = r.metrics.find(key);
  std::ostringstream name;
  name << to_string(r.family) << "." << tag;
  if (it == r.metrics.end()) {
    v.require(false, name.str() + " Monte-Carlo run missing");
    return;
  }
  v.detail << name.str() << "=" << it->second << " ";
  v.require(std::abs(it->second - 1.0) <= 0.1, name.str() + " rmse within 10%");
  const EstimationRun& run = tag == "sq" ? *r.sq_run : *r.cl_run;
  v.require(std::abs(run.bias) <= run.empirical_rmse, name.str() + " bias <= rmse");
}

void criterion_7(Verdict& v) {
  ScenarioConfig c;
  c.shots = 10000;
  c.trials = 200;
  c.seed = 1;
  const ScenarioResult pos = run_position(9.0, c);
  check_mc(v, pos, "sq");
  check_mc(v, pos, "cl");
  const ScenarioResult sg = run_sg_phase(4.0, c);
  check_mc(v, sg, "cl");
  const ScenarioResult quad = run_quadrature_phase(1.5, std::nullopt, c);
  check_mc(v, quad, "sq");
  check_mc(v, quad, "cl");
  const ScenarioResult spin = run_spin(16, c);
  check_mc(v, spin, "sq");
  check_mc(v, spin, "cl");
  DesignOptions o;
  o.ground = GroundConvention::ZeroOverride;
  const ScenarioResult design = design_protocol(build_fock_operator(FockKind::X, 256), build_fock_operator(FockKind::P, 256),
                                                2.0, {}, {4.0, 8.0}, o);
  check_mc(v, design, "sq");
  for (const ScenarioResult* r : {&pos, &sg, &quad, &spin, &design}) collect_margins(*r);

  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  const StateVector probe = solve_intelligent_states(X, P, 4.0).front().state;
  std::vector<double> shots{100.0, 1000.0, 10000.0};
  std::vector<double> rmse;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    rmse.push_back(run_estimation(probe, X, P, 0.0, static_cast<int>(shots[i]), 200, derive_seed(7, i)).empirical_rmse);
  }
  const double slope = fit_loglog(shots, rmse).slope;
  v.detail << "clt_slope=" << slope;
  v.require(std::abs(slope + 0.5) <= 0.05, "CLT slope -0.5 +- 0.05");
}

void criterion_8(Verdict& v) {
  double worst = 1e300;
  std::string where;
  for (const auto& [name, margin] : g_margins) {
    if (margin < worst) {
      worst = margin;
      where = name;
    }
  }
  v.detail << "probes=" << g_margins.size() << " min_margin=" << worst << " at " << where;
  v.require(!g_margins.empty(), "probes evaluated");
  v.require(worst >= 1.0 - 1e-9, "dphi >= bound / 2");
}

void criterion_9(Verdict& v) {
  const Operator X = build_fock_operator(FockKind::X, 256);
  const Operator P = build_fock_operator(FockKind::P, 256);
  double prev = 1e300;
  for (double l : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double d = analytic_delta_phi(solve_intelligent_states(X, P, l).front().state, X, P);
    v.detail << "lambda=" << l << ":" << d << " ";
    v.require(d < prev, "strictly decreasing");
    prev = d;
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_10(Verdict& v) {
  std::vector<std::string> csv;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = fs::temp_directory_path() / ("squeezelab_acceptance_" + std::to_string(run));
    fs::remove_all(dir);
    std::vector<std::string> args{"squeezelab", "sweep", "--family", "position", "--lambda", "4,9,16,25",
                                  "--seed",     "11",    "--shots",  "1000",     "--trials", "50",
                                  "--jobs",     "4",     "--out",    dir.string()};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    v.require(code == kExitOk, "sweep exit code 0");
    csv.push_back(slurp(dir / "results.csv"));
    fs::remove_all(dir);
  }
  v.detail << "csv_bytes=" << csv[0].size();
  v.require(!csv[0].empty() && csv[0] == csv[1], "byte-identical CSV");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"intelligent-state identities", criterion_1}, {"uncertainty theorems", criterion_2},
      {"derivative identity", criterion_3},          {"position family", criterion_4},
      {"quadrature phase family", criterion_5},      {"spin family", criterion_6},
      {"Monte-Carlo consistency", criterion_7},      {"bound consistency", criterion_8},
      {"monotonicity in lambda", criterion_9},       {"determinism", criterion_10},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
