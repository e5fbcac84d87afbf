// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include <gtest/gtest.h>

#include "lgpose/state.hpp"
#include "test_util.hpp"

namespace lgpose {
namespace {

using test::embed;
using test::embed_hat;
using test::Random;
using test::series_exp;

constexpr int kDraws = 100;
constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(StateExp, ZeroIsIdentity) {
  EXPECT_EQ(embed(state_exp(Vec27::Zero().eval())), Eigen::MatrixXd::Identity(22, 22));
}

TEST(StateExp, PelvisTranslationOnly) {
  Vec27 e = Vec27::Zero();
  e.head<3>() << 0.1, -0.2, 0.3;
  const PoseStated x = state_exp(e);
  EXPECT_EQ(x.pose[kPelvis].t, Vec3(0.1, -0.2, 0.3));
  EXPECT_EQ(x.pose[kPelvis].r, Mat3::Identity());
  for (int i : {1, 2}) EXPECT_EQ(x.pose[i].matrix(), Mat4::Identity());
  for (const Vec3& v : x.vel) EXPECT_EQ(v, Vec3::Zero());
}

TEST(StateExp, MatchesSeriesOnDenseEmbedding) {
  Random rng(21);
  for (int i = 0; i < kDraws; ++i) {
    Vec27 e = rng.vec<27>(1.0);
    for (int b = 0; b < 3; ++b) e.segment<3>(pose_col(b) + 3) = rng.rotation_vector(kPi - 0.1);
    EXPECT_LT(max_abs(embed(state_exp(e)) - series_exp(embed_hat(e), 20)), 1e-10);
  }
}

TEST(StateLog, KnownValuesAndRoundTrip) {
  EXPECT_EQ(state_log(PoseStated::Identity()), Vec27::Zero());
  PoseStated v;
  v.vel = {Vec3(1, 2, 3), Vec3(-1, 0, 4), Vec3(0.5, 0.25, -2)};
  Vec27 expected = Vec27::Zero();
  expected.tail<9>() << 1, 2, 3, -1, 0, 4, 0.5, 0.25, -2;
  EXPECT_EQ(state_log(v), expected);

  Random rng(22);
  for (int i = 0; i < kDraws; ++i) {
    const PoseStated x = rng.state(kPi - 0.1);
    EXPECT_LT(max_abs(embed(state_exp(state_log(x))) - embed(x)), 1e-9);
  }
}

TEST(Perturb, BasicIdentities) {
  Random rng(23);
  const PoseStated mu = rng.state();
  const Vec27 e = rng.vec<27>(0.5);
  EXPECT_EQ(embed(perturb(mu, Vec27::Zero().eval())), embed(mu));
  EXPECT_LT(max_abs(embed(perturb(PoseStated::Identity(), e)) - embed(state_exp(e))), 1e-15);
  EXPECT_LT(max_abs(embed(perturb(mu, e)) - embed(mu) * embed(state_exp(e))), 1e-12);
}

// perturb(perturb(mu, a), b) and perturb(mu, a + b) differ at second order (BCH).
TEST(Perturb, FirstOrderComposition) {
  Random rng(24);
  for (int i = 0; i < kDraws; ++i) {
    const PoseStated mu = rng.state();
    const Vec27 a = 1e-4 * rng.vec<27>().normalized();
    const Vec27 b = 1e-4 * rng.vec<27>().normalized();
    const double defect = state_minus(perturb(perturb(mu, a), b), perturb(mu, (a + b).eval())).norm();
    EXPECT_LT(defect, 2 * a.norm() * b.norm());
  }
}

TEST(StateAdjoint, StructureAndConjugation) {
  EXPECT_EQ(state_adjoint(PoseStated::Identity()), Mat27::Identity());
  Random rng(25);
  for (int i = 0; i < kDraws; ++i) {
    const PoseStated x = rng.state();
    const Mat27 ad = state_adjoint(x);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (r == c) continue;
        const int rows = r < 3 ? 6 : 9, cols = c < 3 ? 6 : 9;
        EXPECT_EQ(max_abs(ad.block(6 * r, 6 * c, rows, cols)), 0.0);
      }
    EXPECT_TRUE((ad.bottomRightCorner<9, 9>().isIdentity(0.0)));
    const Vec27 e = rng.vec<27>();
    const Eigen::MatrixXd lhs = embed(x) * embed(state_exp(e)) * embed(state_inverse(x));
    EXPECT_LT(max_abs(lhs - embed(state_exp((ad * e).eval()))), 1e-9);
  }
}

TEST(StateSmallAdjoint, BlocksAndZeroVelocity) {
  EXPECT_EQ(state_small_adjoint(Vec27::Zero().eval()), Mat27::Zero());
  Random rng(26);
  const Vec27 e = rng.vec<27>();
  const Mat27 ad = state_small_adjoint(e);
  for (int b = 0; b < 3; ++b)
    EXPECT_EQ(Mat6(ad.block<6, 6>(pose_col(b), pose_col(b))),
              se3_small_adjoint(e.segment<6>(pose_col(b))));
  EXPECT_EQ(max_abs(ad.bottomRows<9>()), 0.0);
  EXPECT_EQ(max_abs(ad.rightCols<9>()), 0.0);
}

TEST(StateRightJacobian, BlocksAndDefect) {
  EXPECT_EQ(state_right_jacobian(Vec27::Zero().eval()), Mat27::Identity());
  Random rng(27);
  const double h = 1e-5;
  for (int i = 0; i < kDraws; ++i) {
    const Vec27 v = rng.vec<27>(0.8);
    const Mat27 jr = state_right_jacobian(v);
    EXPECT_TRUE((jr.bottomRightCorner<9, 9>().isIdentity(0.0)));
    for (int b = 0; b < 3; ++b)
      EXPECT_EQ(Mat6(jr.block<6, 6>(pose_col(b), pose_col(b))),
                se3_right_jacobian(v.segment<6>(pose_col(b))));

    const Vec27 d = h * rng.vec<27>().normalized();
    const PoseStated lhs = state_exp((v + d).eval());
    const PoseStated rhs = perturb(state_exp(v), (jr * d).eval());
    EXPECT_LT(state_minus(lhs, rhs).norm(), 50 * h * h);
  }
}

// Product-group operators agree with their SE(3) counterparts block by block.
TEST(ProductGroup, BlockProjectionCommutes) {
  Random rng(28);
  for (int i = 0; i < kDraws; ++i) {
    const PoseStated x = rng.state(kPi - 0.1);
    const Vec27 e = rng.vec<27>();
    const PoseStated ex = state_exp(e);
    const Vec27 lx = state_log(x);
    for (int b = 0; b < 3; ++b) {
      const Vec6 xi = e.segment<6>(pose_col(b));
      EXPECT_EQ(ex.pose[b].matrix(), se3_exp(xi).matrix());
      EXPECT_EQ(Vec6(lx.segment<6>(pose_col(b))), se3_log(x.pose[b]));
      EXPECT_EQ(Mat6(state_adjoint(x).block<6, 6>(pose_col(b), pose_col(b))),
                se3_adjoint(x.pose[b]));
      EXPECT_EQ(ex.vel[b], Vec3(e.segment<3>(vel_col(b))));
    }
  }
}

}  // namespace
}  // namespace lgpose
