// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Shared helpers for tests: seeded random draws and the dense matrix
// embeddings of the product group that the library itself never builds.

#pragma once

#include <numbers>
#include <random>

#include <Eigen/Core>

#include "lgpose/biomech.hpp"

namespace lgpose::test {

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<>()(gen_); }

  template <int N>
  Eigen::Matrix<double, N, 1> vec(double scale = 1.0) {
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v(i) = uniform(-scale, scale);
    return v;
  }

  Eigen::VectorXd vec(int n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(-scale, scale);
    return v;
  }

  // Uniform direction, angle uniform in [0, max_angle].
  Vec3 rotation_vector(double max_angle) {
    Vec3 axis(normal(), normal(), normal());
    return uniform(0, max_angle) * axis.normalized();
  }

  Mat3 rotation(double max_angle = std::numbers::pi * 170 / 180) {
    return so3_exp(rotation_vector(max_angle));
  }

  Pose3d pose(double max_angle = std::numbers::pi * 170 / 180, double max_translation = 2.0) {
    return {rotation(max_angle), vec<3>(max_translation)};
  }

  PoseStated state(double max_angle = std::numbers::pi * 170 / 180,
                   double max_translation = 2.0) {
    PoseStated x;
    for (int i = 0; i < 3; ++i) {
      x.pose[i] = pose(max_angle, max_translation);
      x.vel[i] = vec<3>(2.0);
    }
    return x;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Series oracle for exp: the truncated series on A / 2^s, squared back s times.
// The plain truncation of a 20-term series at |A| near pi leaves about 3e-10 of
// truncation error; scaling brings the series argument under 1/2, where the
// remainder is far below double precision.
template <typename Derived>
Eigen::MatrixXd series_exp(const Eigen::MatrixBase<Derived>& a, int terms = 20) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.5) ++s;
  Eigen::MatrixXd m = exp_series(Eigen::MatrixXd(a / std::ldexp(1.0, s)), terms);
  for (int i = 0; i < s; ++i) m = (m * m).eval();
  return m;
}

// Block-diagonal 22x22 matrix of a state: three 4x4 poses and the 10x10 R^9 block.
inline Eigen::MatrixXd embed(const PoseStated& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(22, 22);
  for (int i = 0; i < 3; ++i) m.block<4, 4>(4 * i, 4 * i) = x.pose[i].matrix();
  Eigen::VectorXd v(9);
  v << x.vel[0], x.vel[1], x.vel[2];
  m.block(12, 12, 10, 10) = rn_exp(v);
  return m;
}

inline Eigen::MatrixXd embed_hat(const Vec27& e) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(22, 22);
  for (int i = 0; i < 3; ++i) m.block<4, 4>(4 * i, 4 * i) = se3_hat(e.segment<6>(pose_col(i)));
  m.block(12, 12, 10, 10) = rn_hat(e.tail<9>());
  return m;
}

// A body whose default lengths keep random test states well away from degenerate joints.
inline BodyParams test_body() { return BodyParams{}; }

// State satisfying both thigh-length and hinge constraints with the given knee flexion.
inline PoseStated standing_state(const BodyParams& body, double knee_l, double knee_r,
                                 const Pose3d& world = Pose3d::Identity()) {
  PoseStated x;
  x.pose[kPelvis] = {Mat3::Identity(), Vec3(0, 0, body.z_pelvis)};
  for (Side side : {Side::Left, Side::Right}) {
    const int s = shank_of(side);
    const double alpha = side == Side::Left ? knee_l : knee_r;
    const double y = side == Side::Left ? body.d_pelvis / 2 : -body.d_pelvis / 2;
    const Vec3 hip(0, y, body.z_pelvis);
    // Thigh hangs straight down; the shank is pitched by alpha about the hinge (y).
    const Vec3 knee = hip - Vec3(0, 0, body.thigh(side));
    Mat3 r;
    r << std::cos(alpha), 0, std::sin(alpha), 0, 1, 0, -std::sin(alpha), 0, std::cos(alpha);
    x.pose[s] = {r, knee - body.shank(side) * r.col(2)};
  }
  for (auto& p : x.pose) p = world * p;
  return x;
}

}  // namespace lgpose::test
