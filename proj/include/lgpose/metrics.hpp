// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#pragma once

#include <span>

#include "lgpose/biomech.hpp"

namespace lgpose {

// RMS of the error after removing its mean. Inputs in any unit; output in the same unit.
double rmse_bias_removed(std::span<const double> est, std::span<const double> ref);

// Pearson correlation. NaN when either series has zero variance.
double pearson_cc(std::span<const double> est, std::span<const double> ref);

// |path(est) - path(ref)| / path(ref) * 100, path = sum of per-step distances.
double ttd_deviation(std::span<const Vec3> est, std::span<const Vec3> ref);

}  // namespace lgpose
