// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// SO(3), SE(3) and R^n operators. se(3) coordinates are ordered (rho, phi):
// translation part first, rotation part second.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <cmath>
#include <numbers>

#include "lgpose/errors.hpp"

namespace lgpose {

template <typename S> using Vector3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using Vector4 = Eigen::Matrix<S, 4, 1>;
template <typename S> using Vector6 = Eigen::Matrix<S, 6, 1>;
template <typename S> using Matrix3 = Eigen::Matrix<S, 3, 3>;
template <typename S> using Matrix4 = Eigen::Matrix<S, 4, 4>;
template <typename S> using Matrix6 = Eigen::Matrix<S, 6, 6>;
template <typename S> using Matrix46 = Eigen::Matrix<S, 4, 6>;

// Below this rotation angle the closed forms switch to second-order Taylor expansions.
inline constexpr double kSmallAngle = 1e-7;
// so3_log refuses angles this close to pi.
inline constexpr double kNearPiMargin = 1e-6;

template <typename S>
struct Pose3 {
  Matrix3<S> r = Matrix3<S>::Identity();
  Vector3<S> t = Vector3<S>::Zero();

  static Pose3 Identity() { return {}; }

  Matrix4<S> matrix() const {
    Matrix4<S> m = Matrix4<S>::Identity();
    m.template topLeftCorner<3, 3>() = r;
    m.template topRightCorner<3, 1>() = t;
    return m;
  }

  // Transforms a homogeneous 4-vector (points have w=1, directions w=0).
  Vector4<S> operator*(const Vector4<S>& p) const {
    Vector4<S> out;
    out.template head<3>() = r * p.template head<3>() + t * p(3);
    out(3) = p(3);
    return out;
  }

  Pose3 operator*(const Pose3& o) const { return {r * o.r, r * o.t + t}; }

  Pose3 inverse() const {
    Pose3 inv;
    inv.r = r.transpose();
    inv.t = -(inv.r * t);
    return inv;
  }
};

using Pose3d = Pose3<double>;

// ---------------------------------------------------------------- SO(3)

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_hat(const Eigen::MatrixBase<Derived>& phi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using S = typename Derived::Scalar;
  Matrix3<S> m;
  m << S(0), -phi(2), phi(1),
       phi(2), S(0), -phi(0),
       -phi(1), phi(0), S(0);
  return m;
}

template <typename Derived>
Vector3<typename Derived::Scalar> so3_vee(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  const Matrix3<S> sym = m + m.transpose();
  if (sym.cwiseAbs().maxCoeff() > S(1e-9))
    throw Error(ErrorCode::NonSkewInput, "so3_vee: matrix is not skew-symmetric");
  return Vector3<S>(m(2, 1), m(0, 2), m(1, 0));
}

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_exp(const Eigen::MatrixBase<Derived>& phi) {
  using S = typename Derived::Scalar;
  const Matrix3<S> w = so3_hat(phi);
  const S theta = phi.norm();
  if (theta < S(kSmallAngle)) return Matrix3<S>::Identity() + w + S(0.5) * w * w;
  const S a = std::sin(theta) / theta;
  const S b = (S(1) - std::cos(theta)) / (theta * theta);
  return Matrix3<S>::Identity() + a * w + b * w * w;
}

template <typename Derived>
Vector3<typename Derived::Scalar> so3_log(const Eigen::MatrixBase<Derived>& r) {
  using S = typename Derived::Scalar;
  const Vector3<S> axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  // atan2 keeps full precision at both ends, unlike acos of the trace.
  const S theta = std::atan2(S(0.5) * axis.norm(), S(0.5) * (r.trace() - S(1)));
  if (theta >= S(std::numbers::pi - kNearPiMargin))
    throw Error(ErrorCode::NearPiRotation, "so3_log: rotation angle too close to pi");
  if (theta < S(kSmallAngle)) return S(0.5) * axis;
  return theta / (S(2) * std::sin(theta)) * axis;
}

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_adjoint(const Eigen::MatrixBase<Derived>& r) {
  return r;
}

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_small_adjoint(const Eigen::MatrixBase<Derived>& phi) {
  return so3_hat(phi);
}

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_inverse(const Eigen::MatrixBase<Derived>& r) {
  return r.transpose();
}

// Left Jacobian of SO(3); maps rho to the translation of se3_exp.
template <typename Derived>
Matrix3<typename Derived::Scalar> so3_left_jacobian(const Eigen::MatrixBase<Derived>& phi) {
  using S = typename Derived::Scalar;
  const Matrix3<S> w = so3_hat(phi);
  const S theta = phi.norm();
  if (theta < S(kSmallAngle)) return Matrix3<S>::Identity() + S(0.5) * w + w * w / S(6);
  const S t2 = theta * theta;
  const S b = (S(1) - std::cos(theta)) / t2;
  const S c = (theta - std::sin(theta)) / (t2 * theta);
  return Matrix3<S>::Identity() + b * w + c * w * w;
}

// ---------------------------------------------------------------- SE(3)

template <typename Derived>
Matrix4<typename Derived::Scalar> se3_hat(const Eigen::MatrixBase<Derived>& xi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  using S = typename Derived::Scalar;
  Matrix4<S> m = Matrix4<S>::Zero();
  m.template topLeftCorner<3, 3>() = so3_hat(xi.template tail<3>());
  m.template topRightCorner<3, 1>() = xi.template head<3>();
  return m;
}

template <typename Derived>
Vector6<typename Derived::Scalar> se3_vee(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  if (m.template bottomRows<1>().cwiseAbs().maxCoeff() > S(1e-12))
    throw Error(ErrorCode::MalformedAlgebra, "se3_vee: bottom row must be zero");
  Vector6<S> xi;
  xi << m.template topRightCorner<3, 1>(), so3_vee(m.template topLeftCorner<3, 3>());
  return xi;
}

template <typename Derived>
Pose3<typename Derived::Scalar> se3_exp(const Eigen::MatrixBase<Derived>& xi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  const auto phi = xi.template tail<3>();
  return {so3_exp(phi), so3_left_jacobian(phi) * xi.template head<3>()};
}

template <typename S>
Vector6<S> se3_log(const Pose3<S>& x) {
  const Vector3<S> phi = so3_log(x.r);
  Vector6<S> xi;
  xi << so3_left_jacobian(phi).partialPivLu().solve(x.t), phi;
  return xi;
}

template <typename S>
Pose3<S> se3_inverse(const Pose3<S>& x) {
  return x.inverse();
}

template <typename S>
Matrix6<S> se3_adjoint(const Pose3<S>& x) {
  Matrix6<S> ad = Matrix6<S>::Zero();
  ad.template topLeftCorner<3, 3>() = x.r;
  ad.template topRightCorner<3, 3>() = so3_hat(x.t) * x.r;
  ad.template bottomRightCorner<3, 3>() = x.r;
  return ad;
}

template <typename Derived>
Matrix6<typename Derived::Scalar> se3_small_adjoint(const Eigen::MatrixBase<Derived>& xi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  using S = typename Derived::Scalar;
  Matrix6<S> ad = Matrix6<S>::Zero();
  const Matrix3<S> w = so3_hat(xi.template tail<3>());
  ad.template topLeftCorner<3, 3>() = w;
  ad.template topRightCorner<3, 3>() = so3_hat(xi.template head<3>());
  ad.template bottomRightCorner<3, 3>() = w;
  return ad;
}

// b = (eps, eta) homogeneous; se3_hat(a) * b == se3_odot(b) * a.
template <typename Derived>
Matrix46<typename Derived::Scalar> se3_odot(const Eigen::MatrixBase<Derived>& b) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 4);
  using S = typename Derived::Scalar;
  Matrix46<S> m = Matrix46<S>::Zero();
  m.template topLeftCorner<3, 3>() = b(3) * Matrix3<S>::Identity();
  m.template topRightCorner<3, 3>() = -so3_hat(b.template head<3>());
  return m;
}

// ---------------------------------------------------------------- R^n
// The group R^n embeds v as the last column of an (n+1)x(n+1) identity.

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> rn_hat(
    const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = v.size();
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m = decltype(m)::Zero(n + 1, n + 1);
  m.col(n).head(n) = v;
  return m;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> rn_vee(
    const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index n = m.rows() - 1;
  return m.col(n).head(n);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> rn_exp(
    const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m = rn_hat(v);
  m.diagonal().setOnes();
  return m;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> rn_log(
    const Eigen::MatrixBase<Derived>& m) {
  return rn_vee(m);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> rn_inverse(
    const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> inv = m;
  const Eigen::Index n = m.rows() - 1;
  inv.col(n).head(n) = -m.col(n).head(n);
  return inv;
}

template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> rn_adjoint(Eigen::Index n) {
  return Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
}

template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> rn_small_adjoint(Eigen::Index n) {
  return Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
}

// ---------------------------------------------------------------- series

// sum_{k=0}^{order} A^k / k!
template <typename Derived>
typename Derived::PlainObject exp_series(const Eigen::MatrixBase<Derived>& a, int order) {
  using Plain = typename Derived::PlainObject;
  using S = typename Derived::Scalar;
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "exp_series: order must be >= 1");
  Plain term = Plain::Identity(a.rows(), a.cols());
  Plain sum = term;
  for (int k = 1; k <= order; ++k) {
    term = (term * a) / S(k);
    sum += term;
  }
  return sum;
}

// sum_{i=0}^{order} (-1)^i / (i+1)! ad^i, with `ad` the small adjoint of the tangent vector.
template <typename Derived>
typename Derived::PlainObject right_jacobian_series(const Eigen::MatrixBase<Derived>& ad,
                                                    int order) {
  using Plain = typename Derived::PlainObject;
  using S = typename Derived::Scalar;
  if (order < 1)
    throw Error(ErrorCode::InvalidArgument, "right_jacobian_series: order must be >= 1");
  Plain term = Plain::Identity(ad.rows(), ad.cols());
  Plain sum = term;
  for (int i = 1; i <= order; ++i) {
    term = (term * ad) * (S(-1) / S(i + 1));
    sum += term;
  }
  return sum;
}

template <typename Derived>
Matrix6<typename Derived::Scalar> se3_right_jacobian(const Eigen::MatrixBase<Derived>& xi,
                                                     int order = 10) {
  return right_jacobian_series(se3_small_adjoint(xi), order);
}

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_right_jacobian(const Eigen::MatrixBase<Derived>& phi,
                                                     int order = 10) {
  return right_jacobian_series(so3_small_adjoint(phi), order);
}

}  // namespace lgpose
