// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "squeezelab/io.hpp"

namespace squeezelab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInfeasible = 2;

std::string version_stamp();

struct CheckOutcome {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  int dim = kDefaultFockDim;
  int random_states = 1000;
  int derivative_tuples = 100;
};

/// Invariant suites: Schrodinger slack on random states, SG relations with
/// the tail gate, the derivative identity, and the intelligent-state moment
/// identities.
std::vector<CheckOutcome> run_checks(const CheckOptions& options);

/// Entry point of the command-line tool. Never throws.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace squeezelab
