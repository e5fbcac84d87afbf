// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Filter state: three SE(3) poses (pelvis, left shank, right shank) and three
// world-frame velocities. Tangent vectors have 27 entries:
//   [rho_p phi_p | rho_ls phi_ls | rho_rs phi_rs | v_p | v_ls | v_rs]

#pragma once

#include <array>

#include "lgpose/lie.hpp"

namespace lgpose {

enum Segment : int { kPelvis = 0, kLeftShank = 1, kRightShank = 2 };
enum class Side { Left, Right };

inline constexpr int kStateDim = 27;

constexpr int shank_of(Side side) { return side == Side::Left ? kLeftShank : kRightShank; }
// First column of a segment's SE(3) block in the tangent vector.
constexpr int pose_col(int segment) { return 6 * segment; }
// First column of a segment's velocity block.
constexpr int vel_col(int segment) { return 18 + 3 * segment; }

template <typename S> using Vector27 = Eigen::Matrix<S, kStateDim, 1>;
template <typename S> using Matrix27 = Eigen::Matrix<S, kStateDim, kStateDim>;

template <typename S>
struct PoseState {
  std::array<Pose3<S>, 3> pose;
  std::array<Vector3<S>, 3> vel{Vector3<S>::Zero(), Vector3<S>::Zero(), Vector3<S>::Zero()};

  static PoseState Identity() { return {}; }

  const Pose3<S>& pelvis() const { return pose[kPelvis]; }
  const Pose3<S>& shank(Side side) const { return pose[shank_of(side)]; }
};

using PoseStated = PoseState<double>;

template <typename S>
PoseState<S> compose(const PoseState<S>& a, const PoseState<S>& b) {
  PoseState<S> out;
  for (int i = 0; i < 3; ++i) {
    out.pose[i] = a.pose[i] * b.pose[i];
    out.vel[i] = a.vel[i] + b.vel[i];
  }
  return out;
}

template <typename S>
PoseState<S> state_inverse(const PoseState<S>& x) {
  PoseState<S> out;
  for (int i = 0; i < 3; ++i) {
    out.pose[i] = x.pose[i].inverse();
    out.vel[i] = -x.vel[i];
  }
  return out;
}

template <typename Derived>
PoseState<typename Derived::Scalar> state_exp(const Eigen::MatrixBase<Derived>& e) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, kStateDim);
  PoseState<typename Derived::Scalar> out;
  for (int i = 0; i < 3; ++i) {
    out.pose[i] = se3_exp(e.template segment<6>(pose_col(i)));
    out.vel[i] = e.template segment<3>(vel_col(i));
  }
  return out;
}

template <typename S>
Vector27<S> state_log(const PoseState<S>& x) {
  Vector27<S> e;
  for (int i = 0; i < 3; ++i) {
    e.template segment<6>(pose_col(i)) = se3_log(x.pose[i]);
    e.template segment<3>(vel_col(i)) = x.vel[i];
  }
  return e;
}

// Right perturbation mu * exp(e).
template <typename S, typename Derived>
PoseState<S> perturb(const PoseState<S>& mu, const Eigen::MatrixBase<Derived>& e) {
  return compose(mu, state_exp(e));
}

// log(y^-1 x): the tangent vector taking y to x under right perturbation.
template <typename S>
Vector27<S> state_minus(const PoseState<S>& x, const PoseState<S>& y) {
  return state_log(compose(state_inverse(y), x));
}

template <typename S>
Matrix27<S> state_adjoint(const PoseState<S>& x) {
  Matrix27<S> ad = Matrix27<S>::Zero();
  for (int i = 0; i < 3; ++i)
    ad.template block<6, 6>(pose_col(i), pose_col(i)) = se3_adjoint(x.pose[i]);
  ad.template bottomRightCorner<9, 9>().setIdentity();
  return ad;
}

template <typename Derived>
Matrix27<typename Derived::Scalar> state_small_adjoint(const Eigen::MatrixBase<Derived>& e) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, kStateDim);
  Matrix27<typename Derived::Scalar> ad = Matrix27<typename Derived::Scalar>::Zero();
  for (int i = 0; i < 3; ++i)
    ad.template block<6, 6>(pose_col(i), pose_col(i)) =
        se3_small_adjoint(e.template segment<6>(pose_col(i)));
  return ad;
}

template <typename Derived>
Matrix27<typename Derived::Scalar> state_right_jacobian(const Eigen::MatrixBase<Derived>& e,
                                                        int order = 10) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, kStateDim);
  Matrix27<typename Derived::Scalar> jr = Matrix27<typename Derived::Scalar>::Zero();
  for (int i = 0; i < 3; ++i)
    jr.template block<6, 6>(pose_col(i), pose_col(i)) =
        se3_right_jacobian(e.template segment<6>(pose_col(i)), order);
  jr.template bottomRightCorner<9, 9>().setIdentity();
  return jr;
}

template <typename S>
struct Belief {
  PoseState<S> mu;
  Matrix27<S> cov = Matrix27<S>::Identity();
};

using Beliefd = Belief<double>;

}  // namespace lgpose
