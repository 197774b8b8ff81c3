// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace squeezelab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of log(y) against log(x). All values must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace squeezelab
