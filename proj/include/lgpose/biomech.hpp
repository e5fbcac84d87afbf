// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Motion, measurement and constraint models of the lower body, with their
// Jacobians with respect to the right-perturbation error of the state.

#pragma once

#include <array>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "lgpose/state.hpp"

namespace lgpose {

using Vec3 = Vector3<double>;
using Vec4 = Vector4<double>;
using Vec6 = Vector6<double>;
using Mat3 = Matrix3<double>;
using Mat4 = Matrix4<double>;
using Mat6 = Matrix6<double>;
using Vec27 = Vector27<double>;
using Mat27 = Matrix27<double>;
using RowVec27 = Eigen::Matrix<double, 1, kStateDim>;
using MatX27 = Eigen::Matrix<double, Eigen::Dynamic, kStateDim>;

struct BodyParams {
  double d_pelvis = 0.24;
  double d_lthigh = 0.45;
  double d_rthigh = 0.45;
  double d_lshank = 0.42;
  double d_rshank = 0.42;
  double z_pelvis = 0.83;  // standing pelvis height
  double z_floor = 0.0;
  double knee_rom_min = 0.0;
  double knee_rom_max = std::numbers::pi;

  double thigh(Side s) const { return s == Side::Left ? d_lthigh : d_rthigh; }
  double shank(Side s) const { return s == Side::Left ? d_lshank : d_rshank; }
  void validate() const;
};

// One sample of the three IMUs. Accelerations are world-frame with gravity removed.
struct ImuFrame {
  double t = 0.0;
  std::array<Vec3, 3> acc{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<Mat3, 3> rot{Mat3::Identity(), Mat3::Identity(), Mat3::Identity()};
  bool fc_left = false;
  bool fc_right = false;
};

// Filter noise model. Vectors hold three entries per segment in pelvis,
// left shank, right shank order.
struct NoiseParams {
  Eigen::Matrix<double, 9, 1> sigma_acc2 = Eigen::Matrix<double, 9, 1>::Constant(1e2);
  Eigen::Matrix<double, 9, 1> sigma_qori2 = Eigen::Matrix<double, 9, 1>::Constant(1e3);
  Eigen::Matrix<double, 9, 1> sigma_ori2 = Eigen::Matrix<double, 9, 1>::Constant(1e-2);
  double sigma_mp2 = 0.1;
  Vec4 sigma_ls2{0.01, 0.01, 0.01, 1e-4};
  Vec4 sigma_rs2{0.01, 0.01, 0.01, 1e-4};
  Eigen::Matrix<double, 18, 1> sigma_lim2 = Eigen::Matrix<double, 18, 1>::Constant(10.0);

  void validate() const;
};

// ---------------------------------------------------------------- motion model

Vec27 omega(const PoseStated& x, const ImuFrame& imu, double dt);
// d omega(perturb(x, e)) / de at e = 0.
Mat27 script_C(const PoseStated& x, const ImuFrame& imu, double dt);
Mat27 process_Q(const NoiseParams& noise, double dt);

// ---------------------------------------------------------------- measurements

std::array<Mat3, 3> h_ori(const PoseStated& x);
Eigen::Matrix<double, 9, kStateDim> H_ori();

double h_mp(const PoseStated& x);
RowVec27 H_mp(const PoseStated& x);

// (shank velocity, shank origin height)
Vec4 h_fc(const PoseStated& x, Side side);
Eigen::Matrix<double, 4, kStateDim> H_fc(const PoseStated& x, Side side);

Eigen::Matrix<double, 18, kStateDim> H_lim();

struct Measurement {
  MatX27 H;
  Eigen::VectorXd innovation;  // z - h(x), orientation rows in log form
  Eigen::VectorXd r_diag;
};

Measurement assemble_measurement(const PoseStated& x, const ImuFrame& imu,
                                 const NoiseParams& noise, const BodyParams& body);

// ---------------------------------------------------------------- constraints

// Hip joint minus knee joint, world frame.
Vec3 thigh_vector(const PoseStated& x, const BodyParams& body, Side side);

double c_ltl(const PoseStated& x, const BodyParams& body, Side side);
RowVec27 C_ltl(const PoseStated& x, const BodyParams& body, Side side);

double c_lkh(const PoseStated& x, const BodyParams& body, Side side);
RowVec27 C_lkh(const PoseStated& x, const BodyParams& body, Side side);

// Sagittal knee flexion in (-pi/2, 3pi/2]; 0 is a straight leg.
double knee_angle(const PoseStated& x, const BodyParams& body, Side side);
double clamp_knee(double alpha, const BodyParams& body);

// Residual of holding the knee at alpha_target (treated as a constant).
double c_lkr(const PoseStated& x, const BodyParams& body, Side side, double alpha_target);
RowVec27 C_lkr(const PoseStated& x, const BodyParams& body, Side side, double alpha_target);

struct ConstraintSet {
  MatX27 C;
  Eigen::VectorXd residual;  // -c(x)
  std::array<bool, 2> rom_active{false, false};
};

ConstraintSet assemble_constraints(const PoseStated& x, const BodyParams& body);

// ---------------------------------------------------------------- post-processing

// Thigh frame: z along the thigh toward the hip, y the knee hinge axis.
Mat3 thigh_orientation(const PoseStated& x, const BodyParams& body, Side side);

// Intrinsic Y-X-Z angles (rad) of r_rel = Ry(y) Rx(x) Rz(z), returned as (y, x, z).
Vec3 yxz_angles(const Mat3& r_rel);

struct JointAngles {
  std::array<double, 2> knee{};  // rad; NaN where undefined
  std::array<Vec3, 2> hip{Vec3::Zero(), Vec3::Zero()};  // (y, x, z) rad
};

// Never throws; degenerate geometry yields NaN entries.
JointAngles joint_angles(const PoseStated& x, const BodyParams& body);

}  // namespace lgpose
