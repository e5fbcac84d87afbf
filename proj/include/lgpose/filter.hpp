// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Constrained extended Kalman filter on SE(3)^3 x R^9: predict, measurement
// update (with the covariance limiter), then one constraint projection.

#pragma once

#include <span>
#include <vector>

#include "lgpose/biomech.hpp"

namespace lgpose {

struct FilterConfig {
  NoiseParams noise;
  BodyParams body;
  double p0_scale = 0.5;
  int jacobian_terms = 10;
  // Augment the measurement update with the state pseudo-measurement that
  // bounds covariance growth in unobserved directions.
  bool limiter = true;
  // Compute the minimum covariance eigenvalue for every frame (costs an eigensolve).
  bool diagnostics = false;
  // With diagnostics on, clamp negative covariance eigenvalues to zero.
  bool clamp_eigenvalues = false;

  void validate() const;
};

struct FrameRecord {
  PoseStated predicted;
  PoseStated measured;
  PoseStated constrained;
  double cov_trace = 0;
  double cov_min_eig = 0;  // only filled with diagnostics on
  double innovation_norm = 0;
  double correction_norm = 0;  // |nu| of the constraint step
  std::array<bool, 2> rom_active{false, false};
};

struct FilterResult {
  std::vector<PoseStated> trajectory;
  std::vector<FrameRecord> trace;
  Mat27 final_cov;
};

Beliefd initial_belief(const PoseStated& mu, const FilterConfig& cfg);

// Propagates with the IMU sample taken at the start of the interval.
Beliefd predict(const Beliefd& b, const ImuFrame& imu, double dt, const FilterConfig& cfg);

Beliefd measurement_update(const Beliefd& b, const ImuFrame& imu, const FilterConfig& cfg,
                           double* innovation_norm = nullptr);

Beliefd constraint_update(const Beliefd& b, const FilterConfig& cfg,
                          ConstraintSet* active = nullptr);

// Frame 0 is corrected but not predicted; frame k > 0 is predicted from frame k-1.
// Errors are rethrown with the offending frame index attached.
FilterResult run_filter(std::span<const ImuFrame> frames, const Beliefd& init,
                        const FilterConfig& cfg);

}  // namespace lgpose
