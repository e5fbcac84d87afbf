// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Synthetic walking: pelvis path, footprints, cycloidal swing and two-link leg
// inverse kinematics. Frames: world z up; pelvis x forward, y left; shank
// origin at the ankle with z toward the knee and y along the knee hinge.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lgpose/biomech.hpp"

namespace lgpose {

enum class PathKind { Straight, FigureEight, TurnInPlace };

struct GaitParams {
  double stride_length = 0.7;  // m, two steps
  double cadence = 1.8;        // steps/s; 0 means standing still
  double step_height = 0.1;    // m, peak ankle lift during swing
  double duration = 30.0;      // s
  double sample_rate = 100.0;  // Hz
  double duty = 0.6;           // fraction of a stride each foot is on the floor
  PathKind path = PathKind::Straight;
  double path_radius = 3.0;  // m, figure-eight half-width
  double turn_rate = 0.5;    // rad/s, turn-in-place yaw rate
  BodyParams body;
  std::uint64_t seed = 1;

  void validate() const;
};

// Per-axis variances of the corruption added to simulated sensor streams.
struct SensorNoise {
  double acc_var = 0.04;  // (m/s^2)^2
  double ori_var = 4e-4;  // rad^2
};

struct KinematicSample {
  PoseStated state;
  std::array<Vec3, 3> acc{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<bool, 2> contact{false, false};  // left, right
  std::array<Pose3d, 2> thigh;                // origin at the knee
};

struct GroundTruth {
  std::vector<double> t;
  std::vector<KinematicSample> frames;

  std::size_t size() const { return t.size(); }
};

// Continuous-time gait; generate() samples it on the frame grid.
class GaitModel {
 public:
  explicit GaitModel(const GaitParams& params);
  // Throws InfeasibleGait when the leg cannot reach the planned foot position.
  KinematicSample sample(double t) const;
  const GaitParams& params() const { return p_; }

 private:
  struct PelvisMotion {
    Vec3 pos, vel, acc;
    double yaw;
  };
  struct FootMotion {
    Vec3 pos, vel, acc;
    bool contact;
  };

  PelvisMotion pelvis(double t) const;
  Vec3 hip(double t, Side side) const;
  FootMotion foot(double t, Side side) const;

  GaitParams p_;
  double speed_ = 0;   // nominal walking speed, m/s
  double period_ = 0;  // stride period, s
};

GroundTruth generate(const GaitParams& params);

std::vector<ImuFrame> corrupt(const GroundTruth& truth, const SensorNoise& noise,
                              std::uint64_t seed);

// Exact sensor frames (no corruption).
std::vector<ImuFrame> clean_frames(const GroundTruth& truth);

}  // namespace lgpose
