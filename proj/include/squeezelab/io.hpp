// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * JSON exchange formats for operators, states, configs and results, and the
 * CSV projection of scenario results.
 *
 * Operator: {"space": {"kind": "fock", "dim": d} | {"kind": "spin", "two_j": k},
 *            "entries": [[re, im], ...]}   (row-major, d*d pairs)
 * State:    {"space": {...}, "amplitudes": [[re, im], ...]}
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "squeezelab/scenarios.hpp"

namespace squeezelab {

using Json = nlohmann::ordered_json;

Json space_to_json(const HilbertSpec& space);
HilbertSpec space_from_json(const Json& j);

Json operator_to_json(const Operator& op);
/// Near-Hermitian matrices are replaced by (M + M^dagger)/2 and a warning is
/// appended. `origin` prefixes error messages.
Operator operator_from_json(const Json& j, std::vector<std::string>* warnings = nullptr,
                            const std::string& origin = "operator");

Json state_to_json(const StateVector& state);
StateVector state_from_json(const Json& j, const std::string& origin = "state");

/// Parses a JSON file; parse errors carry the path and byte offset.
Json read_json_file(const std::string& path);
Operator load_operator(const std::string& path, std::vector<std::string>* warnings = nullptr);
StateVector load_state(const std::string& path);

Json to_json(const StrategyProfile& p);
Json to_json(const GainReport& g);
Json to_json(const EstimationRun& run);
Json to_json(const IntelligentState& s);
Json to_json(const LineFit& fit);
Json to_json(const ScenarioResult& r);
Json to_json(const SweepResult& s);

/// Reads known keys over `base`; unknown keys are a Parse error.
ScenarioConfig config_from_json(const Json& j, ScenarioConfig base = {});
Json config_to_json(const ScenarioConfig& c);

/// family,param,N,ratio,predicted,rmse_sq,rmse_cl,flags
std::string csv_header();
std::string csv_row(const ScenarioResult& r);

}  // namespace squeezelab
