// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include "lgpose/gait.hpp"

#include <cmath>
#include <numbers>

#include "lgpose/rng.hpp"

namespace lgpose {

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 rot_z(double yaw) {
  Mat3 r;
  r << std::cos(yaw), -std::sin(yaw), 0, std::sin(yaw), std::cos(yaw), 0, 0, 0, 1;
  return r;
}

Vec3 horizontal(const Vec3& v) { return {v.x(), v.y(), 0}; }

}  // namespace

void GaitParams::validate() const {
  body.validate();
  if (!(sample_rate > 0) || !(duration > 0))
    throw Error(ErrorCode::InvalidArgument, "gait: sample_rate and duration must be > 0");
  if (!(cadence >= 0) || !(stride_length >= 0) || !(step_height >= 0))
    throw Error(ErrorCode::InvalidArgument, "gait: cadence, stride and step height must be >= 0");
  if (!(duty > 0.5 && duty < 1))
    throw Error(ErrorCode::InvalidArgument, "gait: duty must lie in (0.5, 1)");
  if (!(path_radius > 0)) throw Error(ErrorCode::InvalidArgument, "gait: path_radius must be > 0");
}

GaitModel::GaitModel(const GaitParams& params) : p_(params) {
  p_.validate();
  if (p_.cadence > 0) {
    period_ = 2.0 / p_.cadence;
    speed_ = p_.stride_length / period_;
  }
}

GaitModel::PelvisMotion GaitModel::pelvis(double t) const {
  PelvisMotion m{Vec3(0, 0, p_.body.z_pelvis), Vec3::Zero(), Vec3::Zero(), 0.0};
  if (p_.cadence == 0) return m;
  switch (p_.path) {
    case PathKind::Straight:
      m.pos.x() = speed_ * t;
      m.vel.x() = speed_;
      break;
    case PathKind::FigureEight: {
      // Peak speed equals the nominal walking speed.
      const double a = p_.path_radius;
      const double w = speed_ / (std::sqrt(2.0) * a);
      const double s1 = std::sin(w * t), c1 = std::cos(w * t);
      const double s2 = std::sin(2 * w * t), c2 = std::cos(2 * w * t);
      m.pos.head<2>() << a * s1, 0.5 * a * s2;
      m.vel.head<2>() << a * w * c1, a * w * c2;
      m.acc.head<2>() << -a * w * w * s1, -2 * a * w * w * s2;
      m.yaw = std::atan2(m.vel.y(), m.vel.x());
      break;
    }
    case PathKind::TurnInPlace:
      m.yaw = p_.turn_rate * t;
      break;
  }
  return m;
}

Vec3 GaitModel::hip(double t, Side side) const {
  const PelvisMotion m = pelvis(t);
  const double y = side == Side::Left ? p_.body.d_pelvis / 2 : -p_.body.d_pelvis / 2;
  return m.pos + rot_z(m.yaw) * Vec3(0, y, 0);
}

GaitModel::FootMotion GaitModel::foot(double t, Side side) const {
  const Vec3 floor(0, 0, p_.body.z_floor);
  if (p_.cadence == 0) return {horizontal(hip(t, side)) + floor, Vec3::Zero(), Vec3::Zero(), true};

  const double offset = side == Side::Left ? 0.0 : 0.5;
  const double beta = p_.duty;
  const double u = t / period_ - offset;
  const double n = std::floor(u);
  const double frac = u - n;
  // Footprint of stance n sits under the hip at mid-stance.
  auto footprint = [&](double k) -> Vec3 {
    return horizontal(hip((k + offset + beta / 2) * period_, side)) + floor;
  };

  const Vec3 from = footprint(n);
  if (frac < beta) return {from, Vec3::Zero(), Vec3::Zero(), true};

  // Cycloidal horizontal profile and sin^4 lift: both have zero velocity and
  // acceleration at lift-off and touch-down.
  const Vec3 step = footprint(n + 1) - from;
  const double t_sw = (1 - beta) * period_;
  const double s = (frac - beta) / (1 - beta);
  const double sn = std::sin(kPi * s), cs = std::cos(kPi * s);
  const double h = p_.step_height;

  FootMotion m;
  m.contact = false;
  m.pos = from + (s - std::sin(2 * kPi * s) / (2 * kPi)) * step;
  m.pos.z() += h * std::pow(sn, 4);
  m.vel = (1 - std::cos(2 * kPi * s)) / t_sw * step;
  m.vel.z() += 4 * kPi * h * sn * sn * sn * cs / t_sw;
  m.acc = 2 * kPi * std::sin(2 * kPi * s) / (t_sw * t_sw) * step;
  m.acc.z() += 4 * kPi * kPi * h * (3 * sn * sn * cs * cs - std::pow(sn, 4)) / (t_sw * t_sw);
  return m;
}

KinematicSample GaitModel::sample(double t) const {
  const PelvisMotion pm = pelvis(t);
  const Mat3 r_pelvis = rot_z(pm.yaw);

  KinematicSample out;
  out.state.pose[kPelvis] = {r_pelvis, pm.pos};
  out.state.vel[kPelvis] = pm.vel;
  out.acc[kPelvis] = pm.acc;

  for (Side side : {Side::Left, Side::Right}) {
    const int s = shank_of(side);
    const int i = side == Side::Left ? 0 : 1;
    const FootMotion fm = foot(t, side);
    const double ds = p_.body.shank(side), dt = p_.body.thigh(side);

    const Vec3 hip_pos = hip(t, side);
    const Vec3 d = hip_pos - fm.pos;
    const double len = d.norm();
    if (len > ds + dt || len < std::abs(ds - dt))
      throw Error(ErrorCode::InfeasibleGait,
                  "hip-ankle distance " + std::to_string(len) + " m is out of reach");
    const Vec3 u = d / len;
    // Knee hinge: pelvis lateral axis made orthogonal to the leg line.
    const Vec3 lateral = r_pelvis.col(1);
    const Vec3 hinge = (lateral - lateral.dot(u) * u).normalized();
    const Vec3 fwd = hinge.cross(u);
    const double a = (ds * ds - dt * dt + len * len) / (2 * len);
    const double h = std::sqrt(std::max(0.0, ds * ds - a * a));
    const Vec3 knee = fm.pos + a * u + h * fwd;

    const Vec3 z_shank = (knee - fm.pos) / ds;
    Mat3 r_shank;
    r_shank << hinge.cross(z_shank), hinge, z_shank;
    const Vec3 z_thigh = (hip_pos - knee) / dt;
    Mat3 r_thigh;
    r_thigh << hinge.cross(z_thigh), hinge, z_thigh;

    out.state.pose[s] = {r_shank, fm.pos};
    out.state.vel[s] = fm.vel;
    out.acc[s] = fm.acc;
    out.contact[i] = fm.contact;
    out.thigh[i] = {r_thigh, knee};
  }
  return out;
}

GroundTruth generate(const GaitParams& params) {
  const GaitModel model(params);
  const auto n = static_cast<std::size_t>(std::llround(params.duration * params.sample_rate));
  GroundTruth out;
  out.t.reserve(n);
  out.frames.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = double(k) / params.sample_rate;
    out.t.push_back(t);
    out.frames.push_back(model.sample(t));
  }
  return out;
}

std::vector<ImuFrame> clean_frames(const GroundTruth& truth) {
  std::vector<ImuFrame> frames(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const KinematicSample& s = truth.frames[k];
    ImuFrame& f = frames[k];
    f.t = truth.t[k];
    for (int b = 0; b < 3; ++b) {
      f.acc[b] = s.acc[b];
      f.rot[b] = s.state.pose[b].r;
    }
    f.fc_left = s.contact[0];
    f.fc_right = s.contact[1];
  }
  return frames;
}

// Channels: acceleration of segment b, axis i -> 3b+i; orientation -> 9+3b+i.
std::vector<ImuFrame> corrupt(const GroundTruth& truth, const SensorNoise& noise,
                              std::uint64_t seed) {
  std::vector<ImuFrame> frames = clean_frames(truth);
  const double sa = std::sqrt(noise.acc_var), so = std::sqrt(noise.ori_var);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    for (int b = 0; b < 3; ++b) {
      Vec3 na, no;
      for (int i = 0; i < 3; ++i) {
        na(i) = sa * rng::normal(seed, k, std::uint64_t(3 * b + i));
        no(i) = so * rng::normal(seed, k, std::uint64_t(9 + 3 * b + i));
      }
      if (noise.acc_var > 0) frames[k].acc[b] += na;
      if (noise.ori_var > 0) frames[k].rot[b] = frames[k].rot[b] * so3_exp(no);
    }
  }
  return frames;
}

}  // namespace lgpose
