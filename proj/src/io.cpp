// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezelab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace squeezelab {

namespace {

constexpr double kSymmetrizeLimit = 1e-6;

Json complex_list(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) {
    arr.push_back(Json::array({v(i).real(), v(i).imag()}));
  }
  return arr;
}

cplx parse_complex(const Json& j, const std::string& origin, std::size_t index) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    std::ostringstream os;
    os << origin << ": element " << index << " is not a [re, im] pair";
    throw Error(ErrorCode::Parse, os.str());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const Json& require_key(const Json& j, const char* key, const std::string& origin) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::Parse, origin + ": missing key '" + key + "'");
  }
  return j.at(key);
}

std::string number(double v) {
  if (!std::isfinite(v)) {
    return "";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Json space_to_json(const HilbertSpec& space) {
  if (space.is_fock()) {
    return Json{{"kind", "fock"}, {"dim", space.dimension()}};
  }
  return Json{{"kind", "spin"}, {"two_j", space.two_j()}};
}

HilbertSpec space_from_json(const Json& j) {
  const std::string kind = require_key(j, "kind", "space").get<std::string>();
  if (kind == "fock") {
    return HilbertSpec::fock(require_key(j, "dim", "space").get<int>());
  }
  if (kind == "spin") {
    return HilbertSpec::spin(require_key(j, "two_j", "space").get<int>());
  }
  throw Error(ErrorCode::Parse, "space kind must be 'fock' or 'spin', got '" + kind + "'");
}

Json operator_to_json(const Operator& op) {
  const DenseMatrix m = op.dense();
  Json entries = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return Json{{"space", space_to_json(op.space())}, {"entries", std::move(entries)}};
}

Operator operator_from_json(const Json& j, std::vector<std::string>* warnings, const std::string& origin) {
  try {
    const HilbertSpec space = space_from_json(require_key(j, "space", origin));
    const Json& entries = require_key(j, "entries", origin);
    const int d = space.dimension();
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
      std::ostringstream os;
      os << origin << ": 'entries' holds " << (entries.is_array() ? entries.size() : 0) << " values but "
         << space.describe() << " needs " << d << " x " << d << " = " << d * d;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    DenseMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const std::size_t k = static_cast<std::size_t>(r) * d + c;
        m(r, c) = parse_complex(entries[k], origin, k);
      }
    }
    Operator op = Operator::from_dense(space, m);
    if (!op.hermitian() && op.hermitian_defect() <= kSymmetrizeLimit * std::max(1.0, op.max_abs())) {
      if (warnings) {
        std::ostringstream os;
        os << origin << ": symmetrized (hermitian defect " << op.hermitian_defect() << ")";
        warnings->push_back(os.str());
      }
      op = op.hermitian_part();
    }
    return op;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, origin + ": " + e.what());
  }
}

Json state_to_json(const StateVector& state) {
  return Json{{"space", space_to_json(state.space())}, {"amplitudes", complex_list(state.amplitudes())}};
}

StateVector state_from_json(const Json& j, const std::string& origin) {
  try {
    const HilbertSpec space = space_from_json(require_key(j, "space", origin));
    const Json& amps = require_key(j, "amplitudes", origin);
    if (!amps.is_array() || amps.size() != static_cast<std::size_t>(space.dimension())) {
      std::ostringstream os;
      os << origin << ": 'amplitudes' holds " << (amps.is_array() ? amps.size() : 0) << " values but "
         << space.describe() << " has dimension " << space.dimension();
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    Vector v(space.dimension());
    for (std::size_t k = 0; k < amps.size(); ++k) {
      v(static_cast<int>(k)) = parse_complex(amps[k], origin, k);
    }
    return StateVector(space, v);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, origin + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    std::ostringstream os;
    os << path << ":" << line << ": " << e.what();
    throw Error(ErrorCode::Parse, os.str());
  }
}

Operator load_operator(const std::string& path, std::vector<std::string>* warnings) {
  return operator_from_json(read_json_file(path), warnings, path);
}

StateVector load_state(const std::string& path) { return state_from_json(read_json_file(path), path); }

// ---------------------------------------------------------------------------

Json to_json(const StrategyProfile& p) {
  return Json{{"mean_energy", p.mean_energy},
              {"ground_energy", p.ground_energy},
              {"sd_energy", p.sd_energy},
              {"good_ratio", p.good_ratio},
              {"classification", to_string(p.classification)}};
}

Json to_json(const GainReport& g) {
  return Json{{"n_probes", g.n_probes},
              {"delta_phi_sq", g.delta_phi_sq},
              {"delta_phi_cl", g.delta_phi_cl},
              {"ratio", g.ratio},
              {"predicted", g.predicted},
              {"probe_count_rule", to_string(g.probe_count_rule)},
              {"branch", to_string(g.branch)},
              {"sq_profile", to_json(g.sq_profile)},
              {"cl_profile", to_json(g.cl_profile)}};
}

Json to_json(const EstimationRun& run) {
  return Json{{"phi_true", run.phi_true},
              {"shots", run.shots},
              {"trials", run.trials},
              {"seed", run.seed},
              {"empirical_rmse", run.empirical_rmse},
              {"analytic_rmse", run.analytic_rmse},
              {"analytic_delta_phi", run.analytic_delta_phi},
              {"bias", run.bias},
              {"rejected_trials", run.rejected_trials},
              {"window", Json::array({run.window_lo, run.window_hi})},
              {"estimates", run.estimates}};
}

Json to_json(const IntelligentState& s) {
  return Json{{"lambda", Json::array({s.lambda.lambda.real(), s.lambda.lambda.imag()})},
              {"regime", to_string(s.lambda.regime)},
              {"eigenvalue", Json::array({s.eigenvalue.real(), s.eigenvalue.imag()})},
              {"residual", s.residual},
              {"trifonov_residuals", s.trifonov_residuals},
              {"usable", s.usable},
              {"tail_weight", s.state.tail_weight()},
              {"var_A", s.moments.var_A},
              {"var_H", s.moments.var_H},
              {"cov_AH", s.moments.cov_AH},
              {"mean_A", s.moments.mean_A},
              {"mean_H", s.moments.mean_H},
              {"mean_C", Json::array({s.moments.mean_C.real(), s.moments.mean_C.imag()})}};
}

Json to_json(const LineFit& fit) {
  return Json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

Json to_json(const ScenarioResult& r) {
  Json j{{"family", to_string(r.family)}, {r.param_name.empty() ? "param" : r.param_name, r.param}, {"dim", r.dim}};
  j["gain"] = r.gain ? to_json(*r.gain) : Json(nullptr);
  j["sq_run"] = r.sq_run ? to_json(*r.sq_run) : Json(nullptr);
  j["cl_run"] = r.cl_run ? to_json(*r.cl_run) : Json(nullptr);
  j["notes"] = r.notes;
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) {
    metrics[k] = v;
  }
  j["metrics"] = std::move(metrics);
  return j;
}

Json to_json(const SweepResult& s) {
  Json points = Json::array();
  for (const auto& p : s.points) {
    points.push_back(to_json(p));
  }
  return Json{{"family", to_string(s.family)},
              {"points", std::move(points)},
              {"fit_label", s.fit_label},
              {"fit", s.fit ? to_json(*s.fit) : Json(nullptr)}};
}

// ---------------------------------------------------------------------------

ScenarioConfig config_from_json(const Json& j, ScenarioConfig c) {
  if (!j.is_object()) {
    throw Error(ErrorCode::Parse, "config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "family", "lambda", "alpha", "identity_phase", "xi", "alpha_sq", "alpha_cl", "two_j", "A", "H", "budget",
      "lambda_grid", "ground", "dim", "seed", "shots", "trials", "monte_carlo", "constants"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::Parse, "unknown config key '" + key + "'");
    }
  }
  try {
    if (j.contains("family")) c.family = parse_family(j["family"].get<std::string>());
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("alpha")) c.alpha_mag = j["alpha"].get<double>();
    if (j.contains("identity_phase")) c.identity_phase = j["identity_phase"].get<double>();
    if (j.contains("xi")) c.xi = j["xi"].get<double>();
    if (j.contains("alpha_sq")) {
      c.alpha_sq = j["alpha_sq"].is_null() ? std::nullopt : std::optional<double>(j["alpha_sq"].get<double>());
    }
    if (j.contains("alpha_cl")) c.alpha_cl = j["alpha_cl"].get<double>();
    if (j.contains("two_j")) c.two_j = j["two_j"].get<int>();
    if (j.contains("A")) c.a_path = j["A"].get<std::string>();
    if (j.contains("H")) c.h_path = j["H"].get<std::string>();
    if (j.contains("budget")) c.energy_budget = j["budget"].get<double>();
    if (j.contains("lambda_grid")) c.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    if (j.contains("ground")) {
      const auto g = j["ground"].get<std::string>();
      if (g == "spectrum") {
        c.ground = GroundConvention::Spectrum;
      } else if (g == "zero") {
        c.ground = GroundConvention::ZeroOverride;
      } else {
        throw Error(ErrorCode::Parse, "ground must be 'spectrum' or 'zero'");
      }
    }
    if (j.contains("dim")) c.dim = j["dim"].is_null() ? std::nullopt : std::optional<int>(j["dim"].get<int>());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("shots")) c.shots = j["shots"].get<int>();
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("monte_carlo")) c.monte_carlo = j["monte_carlo"].get<bool>();
    if (j.contains("constants")) {
      const Json& k = j["constants"];
      if (k.contains("kappa")) c.constants.kappa = k["kappa"].get<double>();
      if (k.contains("gamma")) c.constants.gamma = k["gamma"].get<double>();
      if (k.contains("band")) c.constants.band = k["band"].get<double>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  return c;
}

Json config_to_json(const ScenarioConfig& c) {
  Json j{{"family", to_string(c.family)},
         {"lambda", c.lambda},
         {"alpha", c.alpha_mag},
         {"identity_phase", c.identity_phase},
         {"xi", c.xi},
         {"alpha_sq", c.alpha_sq ? Json(*c.alpha_sq) : Json(nullptr)},
         {"alpha_cl", c.alpha_cl},
         {"two_j", c.two_j},
         {"A", c.a_path},
         {"H", c.h_path},
         {"budget", c.energy_budget},
         {"lambda_grid", c.lambda_grid},
         {"ground", c.ground == GroundConvention::Spectrum ? "spectrum" : "zero"},
         {"dim", c.dim ? Json(*c.dim) : Json(nullptr)},
         {"seed", c.seed},
         {"shots", c.shots},
         {"trials", c.trials},
         {"monte_carlo", c.monte_carlo},
         {"constants", Json{{"kappa", c.constants.kappa}, {"gamma", c.constants.gamma}, {"band", c.constants.band}}}};
  return j;
}

std::string csv_header() { return "family,param,N,ratio,predicted,rmse_sq,rmse_cl,flags"; }

std::string csv_row(const ScenarioResult& r) {
  std::ostringstream os;
  os << to_string(r.family) << ',' << number(r.param) << ',';
  if (r.gain) {
    os << number(r.gain->n_probes) << ',' << number(r.gain->ratio) << ',' << number(r.gain->predicted);
  } else {
    os << ",,";
  }
  os << ',' << (r.sq_run ? number(r.sq_run->empirical_rmse) : "") << ','
     << (r.cl_run ? number(r.cl_run->empirical_rmse) : "") << ',';
  for (std::size_t i = 0; i < r.notes.size(); ++i) {
    os << (i ? ";" : "") << r.notes[i];
  }
  return os.str();
}

}  // namespace squeezelab
