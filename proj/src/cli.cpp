// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "squeezelab/estimation.hpp"
#include "squeezelab/spectral.hpp"

#ifndef SQUEEZELAB_VERSION
#define SQUEEZELAB_VERSION "0.0.0"
#endif

namespace squeezelab {

namespace fs = std::filesystem;

std::string version_stamp() { return std::string("squeezelab ") + SQUEEZELAB_VERSION; }

// ---------------------------------------------------------------------------
// Invariant suites

namespace {

Vector random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    v(i) = cplx{g(rng), g(rng)};
  }
  return v / v.norm();
}

Operator random_hermitian(std::mt19937_64& rng, const HilbertSpec& space) {
  std::normal_distribution<double> g(0.0, 1.0);
  const int d = space.dimension();
  DenseMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m(r, c) = cplx{g(rng), g(rng)};
    }
  }
  const DenseMatrix h = 0.5 * (m + m.adjoint()) / std::sqrt(static_cast<double>(d));
  return Operator::from_dense(space, h);
}

CheckOutcome schrodinger_suite(const CheckOptions& o) {
  CheckOutcome out{"schrodinger_slack", true, std::numeric_limits<double>::infinity(), -1e-10, ""};
  std::mt19937_64 rng(derive_seed(o.seed, 100));
  const HilbertSpec fock = HilbertSpec::fock(32);
  const HilbertSpec spin = HilbertSpec::spin(16);
  const std::vector<std::pair<Operator, Operator>> pairs = {
      {build_fock_operator(FockKind::X, 32), build_fock_operator(FockKind::P, 32)},
      {random_hermitian(rng, fock), random_hermitian(rng, fock)},
      {build_spin_operator(SpinKind::Jx, 16), build_spin_operator(SpinKind::Jy, 16)},
      {random_hermitian(rng, spin), random_hermitian(rng, spin)},
  };
  for (const auto& [A, H] : pairs) {
    for (int k = 0; k < o.random_states; ++k) {
      const StateVector s(A.space(), random_vector(rng, A.dimension()));
      out.worst = std::min(out.worst, moment_report(s, A, H).schrodinger_slack);
    }
  }
  out.pass = out.worst >= out.threshold;
  out.detail = "min slack over " + std::to_string(4 * o.random_states) + " random states";
  return out;
}

CheckOutcome sgur_suite(const CheckOptions& o) {
  CheckOutcome out{"sgur_slack", true, std::numeric_limits<double>::infinity(), -1e-8, ""};
  for (double alpha : {2.0, 4.0, 6.0}) {
    try {
      const StateVector s = displaced_squeezed_state(alpha, 0.0, o.dim);
      const SgurReport r = check_sgur(s);
      out.worst = std::min({out.worst, r.slack_C, r.slack_S});
    } catch (const TruncationError& e) {
      out.pass = false;
      out.worst = e.tail_weight();
      std::ostringstream os;
      os << "tail-weight gate failed for |alpha| = " << alpha << " at dim " << o.dim << " (suggested dim "
         << e.suggested_dim() << ")";
      out.detail = os.str();
      return out;
    }
  }
  out.pass = out.worst >= out.threshold;
  out.detail = "coherent |alpha| in {2, 4, 6}";
  return out;
}

CheckOutcome derivative_suite(const CheckOptions& o) {
  CheckOutcome out{"derivative_identity", true, 0.0, 1e-4, ""};
  std::mt19937_64 rng(derive_seed(o.seed, 200));
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (int k = 0; k < o.derivative_tuples; ++k) {
    const HilbertSpec space = (k % 2 == 0) ? HilbertSpec::spin(6) : HilbertSpec::fock(20);
    const Operator A = random_hermitian(rng, space);
    const Operator H = random_hermitian(rng, space);
    const StateVector s(space, random_vector(rng, space.dimension()));
    const DerivativeCheck c = derivative_identity_check(s, A, H, phase(rng), 1e-5);
    const double rel = std::abs(c.analytic - c.numeric) / std::max(std::abs(c.analytic), 1e-3);
    out.worst = std::max({out.worst, rel, std::abs(c.analytic_imag)});
  }
  out.pass = out.worst <= out.threshold;
  out.detail = "max relative error over " + std::to_string(o.derivative_tuples) + " random tuples";
  return out;
}

CheckOutcome trifonov_suite(const CheckOptions& o) {
  CheckOutcome out{"intelligent_identities", true, 0.0, 1e-6, ""};
  const Operator X = build_fock_operator(FockKind::X, o.dim);
  const Operator P = build_fock_operator(FockKind::P, o.dim);
  for (cplx l : {cplx{1, 0}, cplx{2, 0}, cplx{4, 0}, cplx{9, 0}, cplx{1, 1}}) {
    try {
      for (const auto& s : solve_intelligent_states(X, P, l)) {
        out.worst = std::max(out.worst, s.max_trifonov_residual());
      }
    } catch (const Error& e) {
      out.pass = false;
      out.detail = e.what();
      return out;
    }
  }
  out.pass = out.worst <= out.threshold;
  out.detail = "(X, P) at lambda in {1, 2, 4, 9, 1+i}";
  return out;
}

}  // namespace

std::vector<CheckOutcome> run_checks(const CheckOptions& options) {
  if (options.dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "dim must be >= 2");
  }
  return {schrodinger_suite(options), sgur_suite(options), derivative_suite(options), trifonov_suite(options)};
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int shots = 10000;
  int trials = 200;
  int dim = 0;
  int jobs = 1;
  bool force = false;
  bool no_mc = false;
};

struct FamilyFlags {
  std::string family;
  std::vector<double> lambda;
  std::vector<double> alpha;
  std::vector<double> xi;
  std::vector<double> two_j;
  std::vector<double> budget;
  double alpha_sq = 0.0;
  double alpha_cl = 0.0;
  std::string a_path;
  std::string h_path;
  std::string ground;
  std::vector<double> grid;
};

void add_common(CLI::App* app, Common& c, bool with_jobs) {
  app->add_option("--config", c.config_path, "JSON config file");
  app->add_option("--out", c.out_dir, "Output directory");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--shots", c.shots, "Measurements per trial");
  app->add_option("--trials", c.trials, "Monte-Carlo trials");
  app->add_option("--dim", c.dim, "Fock truncation (fixed)");
  if (with_jobs) app->add_option("--jobs", c.jobs, "Parallel sweep points");
  app->add_flag("--force", c.force, "Overwrite existing outputs");
  app->add_flag("--no-mc", c.no_mc, "Skip Monte-Carlo cross-checks");
}

void add_family(CLI::App* app, FamilyFlags& f) {
  app->add_option("--family", f.family, "position | sg | quadrature | spin | custom");
  app->add_option("--lambda", f.lambda, "Squeezing parameter(s)")->delimiter(',');
  app->add_option("--alpha", f.alpha, "Coherent amplitude(s) for sg")->delimiter(',');
  app->add_option("--xi", f.xi, "Squeezing strength(s) for quadrature")->delimiter(',');
  app->add_option("--alpha-sq", f.alpha_sq, "Displacement of the squeezed quadrature probe");
  app->add_option("--alpha-cl", f.alpha_cl, "Classical quadrature amplitude");
  app->add_option("--two-j", f.two_j, "Twice the spin (list allowed)")->delimiter(',');
  app->add_option("--A", f.a_path, "Observable operator file (custom)");
  app->add_option("--H", f.h_path, "Hamiltonian operator file (custom)");
  app->add_option("--budget", f.budget, "Energy budget(s) above ground (custom)")->delimiter(',');
  app->add_option("--ground", f.ground, "spectrum | zero");
  app->add_option("--lambda-grid", f.grid, "Designer grid")->delimiter(',');
}

int env_default_dim() {
  if (const char* v = std::getenv("SQUEEZELAB_DIM")) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(v, &used);
      if (used == std::string(v).size() && d >= 2) return d;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidDimension, std::string("SQUEEZELAB_DIM='") + v + "' is not a dimension >= 2");
  }
  return kDefaultFockDim;
}

ScenarioConfig build_config(const Common& c, const FamilyFlags& f, const CLI::App& app) {
  ScenarioConfig cfg;
  cfg.default_dim = env_default_dim();
  if (!c.config_path.empty()) {
    cfg = config_from_json(read_json_file(c.config_path), cfg);
  }
  const auto given = [&](const char* name) { return app.count(name) > 0; };
  if (!f.family.empty()) cfg.family = parse_family(f.family);
  if (!f.lambda.empty()) cfg.lambda = f.lambda.front();
  if (!f.alpha.empty()) cfg.alpha_mag = f.alpha.front();
  if (!f.xi.empty()) cfg.xi = f.xi.front();
  if (given("--alpha-sq")) cfg.alpha_sq = f.alpha_sq;
  if (given("--alpha-cl")) cfg.alpha_cl = f.alpha_cl;
  if (!f.two_j.empty()) cfg.two_j = static_cast<int>(f.two_j.front());
  if (!f.a_path.empty()) cfg.a_path = f.a_path;
  if (!f.h_path.empty()) cfg.h_path = f.h_path;
  if (!f.budget.empty()) cfg.energy_budget = f.budget.front();
  if (!f.grid.empty()) cfg.lambda_grid = f.grid;
  if (!f.ground.empty()) {
    cfg = config_from_json(Json{{"ground", f.ground}}, cfg);
  }
  if (given("--seed")) cfg.seed = c.seed;
  if (given("--shots")) cfg.shots = c.shots;
  if (given("--trials")) cfg.trials = c.trials;
  if (given("--dim")) cfg.dim = c.dim;
  if (c.no_mc) cfg.monte_carlo = false;
  return cfg;
}

/// Refuses to replace existing outputs unless forced.
void prepare_outputs(const std::string& dir, const std::vector<std::string>& names, bool force) {
  fs::create_directories(dir);
  for (const auto& n : names) {
    const fs::path p = fs::path(dir) / n;
    if (fs::exists(p) && !force) {
      throw Error(ErrorCode::Io, "'" + p.string() + "' exists; pass --force to overwrite");
    }
  }
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  const fs::path p = fs::path(dir) / name;
  std::ofstream os(p, std::ios::trunc);
  if (!os) {
    throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
  }
  os << text;
}

Json manifest(const std::string& command, const Common& c, const ScenarioConfig& cfg, const Json& params) {
  return Json{{"command", command},
              {"config_path", c.config_path},
              {"output_dir", c.out_dir},
              {"master_seed", cfg.seed},
              {"version_stamp", version_stamp()},
              {"config", config_to_json(cfg)},
              {"params", params}};
}

void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
}

std::vector<double> sweep_params(const FamilyFlags& f, Family family) {
  switch (family) {
    case Family::Position: return f.lambda;
    case Family::SGPhase: return f.alpha;
    case Family::QuadraturePhase: return f.xi;
    case Family::SpinRotation: return f.two_j;
    case Family::Custom: return f.budget;
  }
  return {};
}

Operator load_operator_file(const std::string& path, std::vector<std::string>& warnings) {
  return load_operator(path, &warnings);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Squeezed-probe estimation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_stamp());

  Common common;
  FamilyFlags fam;

  CLI::App* scenario = app.add_subcommand("scenario", "Run one scenario");
  add_common(scenario, common, false);
  add_family(scenario, fam);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter list");
  add_common(sweep, common, true);
  add_family(sweep, fam);

  CLI::App* design = app.add_subcommand("design", "Design a squeezed protocol for (A, H)");
  add_common(design, common, false);
  std::string pair;
  design->add_option("--pair", pair, "Built-in pair: xp | spin (instead of --A/--H)");
  add_family(design, fam);

  CLI::App* solve = app.add_subcommand("solve", "List intelligent states of lambda A + i H");
  std::string solve_a;
  std::string solve_h;
  double lambda_re = 1.0;
  double lambda_im = 0.0;
  double accept_tol = 1e-8;
  std::string solve_out;
  bool solve_force = false;
  solve->add_option("--A", solve_a, "Observable operator file")->required();
  solve->add_option("--H", solve_h, "Hamiltonian operator file")->required();
  solve->add_option("--lambda", lambda_re, "Re(lambda)")->required();
  solve->add_option("--lambda-im", lambda_im, "Im(lambda)");
  solve->add_option("--accept-tol", accept_tol, "Residual acceptance");
  solve->add_option("--out", solve_out, "Output directory");
  solve->add_flag("--force", solve_force, "Overwrite existing outputs");

  CLI::App* check = app.add_subcommand("check", "Run the invariant suites");
  CheckOptions check_opts;
  std::string check_out;
  bool check_force = false;
  int check_dim = 0;
  check->add_option("--seed", check_opts.seed, "Seed for random states");
  check->add_option("--dim", check_dim, "Fock truncation");
  check->add_option("--states", check_opts.random_states, "Random states per pair");
  check->add_option("--out", check_out, "Output directory");
  check->add_flag("--force", check_force, "Overwrite existing outputs");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << version_stamp() << '\n';
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      emit_error(err, "usage", e.what());
      return kExitValidation;
    }
    if (scenario->parsed()) {
      const CLI::App& sub = *scenario;
      const ScenarioConfig cfg = build_config(common, fam, sub);
      if (!common.out_dir.empty()) {
        prepare_outputs(common.out_dir, {"results.jsonl", "results.csv", "manifest.json"}, common.force);
      }
      const ScenarioResult r = run_scenario(cfg);
      const Json j = to_json(r);
      if (!common.out_dir.empty()) {
        write_file(common.out_dir, "results.jsonl", j.dump() + "\n");
        write_file(common.out_dir, "results.csv", csv_header() + "\n" + csv_row(r) + "\n");
        write_file(common.out_dir, "manifest.json", manifest("scenario", common, cfg, Json::array()).dump(2) + "\n");
      }
      out << csv_header() << '\n' << csv_row(r) << '\n';
      return kExitOk;
    }
    if (sweep->parsed()) {
      const ScenarioConfig cfg = build_config(common, fam, *sweep);
      const std::vector<double> params = sweep_params(fam, cfg.family);
      if (params.empty()) {
        throw Error(ErrorCode::InvalidParameter, "sweep needs a parameter list for family " +
                                                     std::string(to_string(cfg.family)));
      }
      if (!common.out_dir.empty()) {
        prepare_outputs(common.out_dir, {"results.jsonl", "results.csv", "summary.json", "manifest.json"},
                        common.force);
      }
      const SweepResult s = run_sweep(cfg, params, common.jobs);
      std::string jsonl;
      std::string csv = csv_header() + "\n";
      for (const auto& p : s.points) {
        jsonl += to_json(p).dump() + "\n";
        csv += csv_row(p) + "\n";
      }
      Json summary{{"family", to_string(s.family)}, {"fit_label", s.fit_label},
                   {"fit", s.fit ? to_json(*s.fit) : Json(nullptr)}, {"points", s.points.size()}};
      if (!common.out_dir.empty()) {
        write_file(common.out_dir, "results.jsonl", jsonl);
        write_file(common.out_dir, "results.csv", csv);
        write_file(common.out_dir, "summary.json", summary.dump(2) + "\n");
        write_file(common.out_dir, "manifest.json", manifest("sweep", common, cfg, params).dump(2) + "\n");
      }
      out << csv;
      if (s.fit) {
        out << "# fit " << s.fit_label << ": slope " << s.fit->slope << " r2 " << s.fit->r_squared << '\n';
      }
      return kExitOk;
    }
    if (design->parsed()) {
      ScenarioConfig cfg = build_config(common, fam, *design);
      std::vector<std::string> warnings;
      std::optional<Operator> A;
      std::optional<Operator> H;
      if (pair == "xp") {
        const int d = cfg.dim.value_or(2 * cfg.default_dim);
        A = build_fock_operator(FockKind::X, d);
        H = build_fock_operator(FockKind::P, d);
        if (fam.ground.empty()) cfg.ground = GroundConvention::ZeroOverride;
      } else if (pair == "spin") {
        A = build_spin_operator(SpinKind::Jx, cfg.two_j);
        H = -build_spin_operator(SpinKind::Jy, cfg.two_j);
      } else if (pair.empty()) {
        if (cfg.a_path.empty() || cfg.h_path.empty()) {
          throw Error(ErrorCode::InvalidParameter, "design needs --pair or both --A and --H");
        }
        A = load_operator_file(cfg.a_path, warnings);
        H = load_operator_file(cfg.h_path, warnings);
      } else {
        throw Error(ErrorCode::InvalidParameter, "unknown pair '" + pair + "' (expected xp or spin)");
      }
      for (const auto& w : warnings) {
        err << Json{{"warning", w}}.dump() << '\n';
      }
      if (!common.out_dir.empty()) {
        prepare_outputs(common.out_dir, {"results.jsonl", "results.csv", "manifest.json"}, common.force);
      }
      DesignOptions opts;
      opts.ground = cfg.ground;
      opts.seed = cfg.seed;
      opts.shots = cfg.shots;
      opts.trials = cfg.trials;
      opts.monte_carlo = cfg.monte_carlo;
      const std::vector<double> grid = cfg.lambda_grid.empty() ? default_design_grid() : cfg.lambda_grid;
      ScenarioResult r;
      try {
        r = design_protocol(*A, *H, cfg.energy_budget, cfg.constants, grid, opts);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible) throw;
        err << Json{{"error", "infeasible"}, {"message", e.what()}, {"budget", cfg.energy_budget}, {"grid", grid}}.dump()
            << '\n';
        return kExitInfeasible;
      }
      const Json j = to_json(r);
      if (!common.out_dir.empty()) {
        write_file(common.out_dir, "results.jsonl", j.dump() + "\n");
        write_file(common.out_dir, "results.csv", csv_header() + "\n" + csv_row(r) + "\n");
        write_file(common.out_dir, "manifest.json", manifest("design", common, cfg, grid).dump(2) + "\n");
      }
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (solve->parsed()) {
      std::vector<std::string> warnings;
      const Operator A = load_operator(solve_a, &warnings);
      const Operator H = load_operator(solve_h, &warnings);
      for (const auto& w : warnings) {
        err << Json{{"warning", w}}.dump() << '\n';
      }
      Json listing = Json::array();
      for (const auto& s : solve_intelligent_states(A, H, cplx{lambda_re, lambda_im}, accept_tol)) {
        listing.push_back(to_json(s));
      }
      const Json j{{"lambda", Json::array({lambda_re, lambda_im})}, {"states", std::move(listing)}};
      if (!solve_out.empty()) {
        prepare_outputs(solve_out, {"states.json"}, solve_force);
        write_file(solve_out, "states.json", j.dump(2) + "\n");
      }
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (check->parsed()) {
      check_opts.dim = check_dim > 0 ? check_dim : env_default_dim();
      const std::vector<CheckOutcome> outcomes = run_checks(check_opts);
      Json report = Json::array();
      bool all = true;
      for (const auto& c : outcomes) {
        all = all && c.pass;
        report.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"worst", c.worst}, {"threshold", c.threshold},
                              {"detail", c.detail}});
      }
      const Json j{{"dim", check_opts.dim}, {"seed", check_opts.seed}, {"pass", all}, {"suites", report}};
      if (!check_out.empty()) {
        prepare_outputs(check_out, {"check.json"}, check_force);
        write_file(check_out, "check.json", j.dump(2) + "\n");
      }
      out << j.dump(2) << '\n';
      return all ? kExitOk : kExitValidation;
    }
  } catch (const Error& e) {
    emit_error(err, std::string(to_string(e.code())), e.what());
    return e.code() == ErrorCode::Infeasible ? kExitInfeasible : kExitValidation;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace squeezelab
