// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include "lgpose/biomech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgpose {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

const Vec4 kOrigin(0, 0, 0, 1);
const Vec4 kAxisX(1, 0, 0, 0);
const Vec4 kAxisY(0, 1, 0, 0);
const Vec4 kAxisZ(0, 0, 1, 0);

Vec4 hip_point(const BodyParams& body, Side side) {
  const double y = side == Side::Left ? body.d_pelvis / 2 : -body.d_pelvis / 2;
  return {0, y, 0, 1};
}

Vec4 knee_point(const BodyParams& body, Side side) { return {0, 0, body.shank(side), 1}; }

// d(E T p)/d(eps) for T perturbed on the right: E T p_odot.
Eigen::Matrix<double, 3, 6> point_jacobian(const Pose3d& t, const Vec4& p) {
  return t.r * se3_odot(p).topRows<3>();
}

// Shank direction in world frame: E T d for a direction d (w = 0).
Vec3 direction(const Pose3d& t, const Vec4& d) { return t.r * d.head<3>(); }

// Row for c = (E T_s d)^T tau with d a fixed shank-frame direction.
RowVec27 directional_row(const PoseStated& x, const BodyParams& body, Side side,
                         const Vec4& d) {
  const int s = shank_of(side);
  const Pose3d& tp = x.pose[kPelvis];
  const Pose3d& ts = x.pose[s];
  const Vec3 axis = direction(ts, d);
  const Vec3 tau = thigh_vector(x, body, side);
  RowVec27 row = RowVec27::Zero();
  row.segment<6>(pose_col(kPelvis)) = axis.transpose() * point_jacobian(tp, hip_point(body, side));
  row.segment<6>(pose_col(s)) = -axis.transpose() * point_jacobian(ts, knee_point(body, side)) +
                                tau.transpose() * point_jacobian(ts, d);
  return row;
}

Vec4 rom_direction(double alpha_target) {
  const double a = alpha_target - kHalfPi;
  return std::cos(a) * kAxisZ - std::sin(a) * kAxisX;
}

}  // namespace

void BodyParams::validate() const {
  for (double d : {d_pelvis, d_lthigh, d_rthigh, d_lshank, d_rshank})
    if (!(d > 0)) throw Error(ErrorCode::InvalidArgument, "body: segment lengths must be > 0");
  if (!(knee_rom_min <= knee_rom_max))
    throw Error(ErrorCode::InvalidArgument, "body: knee_rom_min must not exceed knee_rom_max");
}

void NoiseParams::validate() const {
  auto positive = [](const auto& v) { return (v.array() > 0).all(); };
  if (!positive(sigma_acc2) || !positive(sigma_qori2) || !positive(sigma_ori2) ||
      !(sigma_mp2 > 0) || !positive(sigma_ls2) || !positive(sigma_rs2) || !positive(sigma_lim2))
    throw Error(ErrorCode::InvalidArgument, "noise: variances must be > 0");
}

// ---------------------------------------------------------------- motion model

Vec27 omega(const PoseStated& x, const ImuFrame& imu, double dt) {
  Vec27 w = Vec27::Zero();
  for (int b = 0; b < 3; ++b) {
    w.segment<3>(pose_col(b)) =
        imu.rot[b].transpose() * (dt * x.vel[b] + 0.5 * dt * dt * imu.acc[b]);
    w.segment<3>(vel_col(b)) = dt * imu.acc[b];
  }
  return w;
}

Mat27 script_C(const PoseStated&, const ImuFrame& imu, double dt) {
  Mat27 c = Mat27::Zero();
  for (int b = 0; b < 3; ++b)
    c.block<3, 3>(pose_col(b), vel_col(b)) = dt * imu.rot[b].transpose();
  return c;
}

Mat27 process_Q(const NoiseParams& noise, double dt) {
  Vec27 d;
  for (int b = 0; b < 3; ++b) {
    d.segment<3>(pose_col(b)) = 0.5 * dt * dt * noise.sigma_acc2.segment<3>(3 * b);
    d.segment<3>(pose_col(b) + 3) = noise.sigma_qori2.segment<3>(3 * b);
    d.segment<3>(vel_col(b)) = dt * noise.sigma_acc2.segment<3>(3 * b);
  }
  return d.asDiagonal();
}

// ---------------------------------------------------------------- measurements

std::array<Mat3, 3> h_ori(const PoseStated& x) {
  return {x.pose[0].r, x.pose[1].r, x.pose[2].r};
}

Eigen::Matrix<double, 9, kStateDim> H_ori() {
  Eigen::Matrix<double, 9, kStateDim> h = decltype(h)::Zero();
  for (int b = 0; b < 3; ++b) h.block<3, 3>(3 * b, pose_col(b) + 3).setIdentity();
  return h;
}

double h_mp(const PoseStated& x) { return x.pose[kPelvis].t.z(); }

RowVec27 H_mp(const PoseStated& x) {
  RowVec27 h = RowVec27::Zero();
  h.segment<6>(pose_col(kPelvis)) = point_jacobian(x.pose[kPelvis], kOrigin).row(2);
  return h;
}

Vec4 h_fc(const PoseStated& x, Side side) {
  const int s = shank_of(side);
  Vec4 h;
  h << x.vel[s], x.pose[s].t.z();
  return h;
}

Eigen::Matrix<double, 4, kStateDim> H_fc(const PoseStated& x, Side side) {
  const int s = shank_of(side);
  Eigen::Matrix<double, 4, kStateDim> h = decltype(h)::Zero();
  h.block<3, 3>(0, vel_col(s)).setIdentity();
  h.block<1, 6>(3, pose_col(s)) = point_jacobian(x.pose[s], kOrigin).row(2);
  return h;
}

Eigen::Matrix<double, 18, kStateDim> H_lim() {
  Eigen::Matrix<double, 18, kStateDim> h = decltype(h)::Zero();
  h.leftCols<18>().setIdentity();
  return h;
}

Measurement assemble_measurement(const PoseStated& x, const ImuFrame& imu,
                                 const NoiseParams& noise, const BodyParams& body) {
  const int rows = 10 + 4 * (int(imu.fc_left) + int(imu.fc_right));
  Measurement m;
  m.H.setZero(rows, kStateDim);
  m.innovation.resize(rows);
  m.r_diag.resize(rows);

  m.H.topRows<9>() = H_ori();
  for (int b = 0; b < 3; ++b)
    m.innovation.segment<3>(3 * b) = so3_log(x.pose[b].r.transpose() * imu.rot[b]);
  m.r_diag.head<9>() = noise.sigma_ori2;

  m.H.row(9) = H_mp(x);
  m.innovation(9) = body.z_pelvis - h_mp(x);
  m.r_diag(9) = noise.sigma_mp2;

  int row = 10;
  for (Side side : {Side::Left, Side::Right}) {
    const bool contact = side == Side::Left ? imu.fc_left : imu.fc_right;
    if (!contact) continue;
    m.H.middleRows<4>(row) = H_fc(x, side);
    m.innovation.segment<4>(row) = Vec4(0, 0, 0, body.z_floor) - h_fc(x, side);
    m.r_diag.segment<4>(row) = side == Side::Left ? noise.sigma_ls2 : noise.sigma_rs2;
    row += 4;
  }
  return m;
}

// ---------------------------------------------------------------- constraints

Vec3 thigh_vector(const PoseStated& x, const BodyParams& body, Side side) {
  const Vec4 hip = x.pose[kPelvis] * hip_point(body, side);
  const Vec4 knee = x.pose[shank_of(side)] * knee_point(body, side);
  return (hip - knee).head<3>();
}

double c_ltl(const PoseStated& x, const BodyParams& body, Side side) {
  const double d = body.thigh(side);
  return thigh_vector(x, body, side).squaredNorm() - d * d;
}

RowVec27 C_ltl(const PoseStated& x, const BodyParams& body, Side side) {
  const int s = shank_of(side);
  const Vec3 tau = thigh_vector(x, body, side);
  RowVec27 row = RowVec27::Zero();
  row.segment<6>(pose_col(kPelvis)) =
      2.0 * tau.transpose() * point_jacobian(x.pose[kPelvis], hip_point(body, side));
  row.segment<6>(pose_col(s)) =
      -2.0 * tau.transpose() * point_jacobian(x.pose[s], knee_point(body, side));
  return row;
}

double c_lkh(const PoseStated& x, const BodyParams& body, Side side) {
  return direction(x.pose[shank_of(side)], kAxisY).dot(thigh_vector(x, body, side));
}

RowVec27 C_lkh(const PoseStated& x, const BodyParams& body, Side side) {
  return directional_row(x, body, side, kAxisY);
}

double knee_angle(const PoseStated& x, const BodyParams& body, Side side) {
  const Pose3d& ts = x.pose[shank_of(side)];
  const Vec3 tau = thigh_vector(x, body, side);
  const double along_x = ts.r.col(0).dot(tau);
  const double along_z = ts.r.col(2).dot(tau);
  if (std::hypot(along_x, along_z) <= 1e-9)
    throw Error(ErrorCode::DegenerateProjection, "knee_angle: thigh parallel to knee axis");
  double alpha = std::atan2(-along_z, -along_x) + kHalfPi;
  if (alpha <= -kHalfPi) alpha += 2 * std::numbers::pi;
  return alpha;
}

double clamp_knee(double alpha, const BodyParams& body) {
  return std::min(body.knee_rom_max, std::max(body.knee_rom_min, alpha));
}

double c_lkr(const PoseStated& x, const BodyParams& body, Side side, double alpha_target) {
  return direction(x.pose[shank_of(side)], rom_direction(alpha_target))
      .dot(thigh_vector(x, body, side));
}

RowVec27 C_lkr(const PoseStated& x, const BodyParams& body, Side side, double alpha_target) {
  return directional_row(x, body, side, rom_direction(alpha_target));
}

ConstraintSet assemble_constraints(const PoseStated& x, const BodyParams& body) {
  std::vector<RowVec27> rows;
  std::vector<double> res;
  ConstraintSet out;
  for (Side side : {Side::Left, Side::Right}) {
    rows.push_back(C_ltl(x, body, side));
    res.push_back(-c_ltl(x, body, side));
    rows.push_back(C_lkh(x, body, side));
    res.push_back(-c_lkh(x, body, side));

    double alpha = 0;
    try {
      alpha = knee_angle(x, body, side);
    } catch (const Error&) {
      continue;  // knee angle undefined; the ROM row has no meaning this frame
    }
    const double target = clamp_knee(alpha, body);
    if (target == alpha) continue;
    out.rom_active[side == Side::Left ? 0 : 1] = true;
    rows.push_back(C_lkr(x, body, side, target));
    res.push_back(-c_lkr(x, body, side, target));
  }
  out.C.resize(Eigen::Index(rows.size()), kStateDim);
  out.residual.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.C.row(Eigen::Index(i)) = rows[i];
    out.residual(Eigen::Index(i)) = res[i];
  }
  return out;
}

// ---------------------------------------------------------------- post-processing

Mat3 thigh_orientation(const PoseStated& x, const BodyParams& body, Side side) {
  const Vec3 tau = thigh_vector(x, body, side);
  const double len = tau.norm();
  if (len <= 1e-9) throw Error(ErrorCode::DegenerateProjection, "thigh_orientation: zero thigh");
  const Vec3 z = tau / len;
  const Vec3 hinge = x.pose[shank_of(side)].r.col(1);
  Vec3 y = hinge - hinge.dot(z) * z;
  if (y.norm() <= 1e-9)
    throw Error(ErrorCode::DegenerateProjection, "thigh_orientation: thigh parallel to knee axis");
  y.normalize();
  Mat3 r;
  r << y.cross(z), y, z;
  return r;
}

Vec3 yxz_angles(const Mat3& r) {
  const double x = std::asin(std::clamp(-r(1, 2), -1.0, 1.0));
  const double y = std::atan2(r(0, 2), r(2, 2));
  const double z = std::atan2(r(1, 0), r(1, 1));
  return {y, x, z};
}

JointAngles joint_angles(const PoseStated& x, const BodyParams& body) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  JointAngles out;
  for (Side side : {Side::Left, Side::Right}) {
    const int i = side == Side::Left ? 0 : 1;
    try {
      out.knee[i] = knee_angle(x, body, side);
    } catch (const Error&) {
      out.knee[i] = nan;
    }
    try {
      out.hip[i] = yxz_angles(x.pose[kPelvis].r.transpose() * thigh_orientation(x, body, side));
    } catch (const Error&) {
      out.hip[i] = Vec3::Constant(nan);
    }
  }
  return out;
}

}  // namespace lgpose
