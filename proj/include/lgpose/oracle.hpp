// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Central-difference Jacobians through the right perturbation of the state.
// These back the tests of every analytic model Jacobian.

#pragma once

#include <Eigen/Core>

#include "lgpose/state.hpp"

namespace lgpose {

struct VectorMinus {
  template <typename T>
  Eigen::VectorXd operator()(const T& y, const T& y0) const {
    return Eigen::VectorXd(y - y0);
  }
};

// Column j = minus(f(mu (+) h e_j), f(mu (+) -h e_j)) / 2h. For group-valued f pass
// a `minus` returning vee(log(y0^-1 y)).
template <typename F, typename Minus = VectorMinus>
Eigen::MatrixXd numeric_jacobian(F&& f, const PoseStated& mu, double h, Minus minus = {}) {
  if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "numeric_jacobian: step must be > 0");
  Eigen::MatrixXd jac;
  for (int j = 0; j < kStateDim; ++j) {
    Vector27<double> e = Vector27<double>::Zero();
    e(j) = h;
    const Eigen::VectorXd col = minus(f(perturb(mu, e)), f(perturb(mu, (-e).eval())));
    if (j == 0) jac.resize(col.size(), kStateDim);
    jac.col(j) = col / (2 * h);
  }
  return jac;
}

// Rotation-valued outputs: vee(log(r0^T r)).
struct RotationMinus {
  Eigen::VectorXd operator()(const Matrix3<double>& r, const Matrix3<double>& r0) const {
    return so3_log(r0.transpose() * r);
  }
};

}  // namespace lgpose
