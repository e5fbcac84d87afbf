// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include "lgpose/filter.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lgpose {

namespace {

constexpr double kMaxCondition = 1e12;

void check_finite(const Beliefd& b, const char* where) {
  bool ok = b.cov.allFinite();
  for (int i = 0; i < 3 && ok; ++i)
    ok = b.mu.pose[i].r.allFinite() && b.mu.pose[i].t.allFinite() && b.mu.vel[i].allFinite();
  if (!ok) throw Error(ErrorCode::NonFiniteState, std::string(where) + ": non-finite state");
}

void symmetrize(Mat27& p) { p = (0.5 * (p + p.transpose())).eval(); }

// LDLT::rcond() treats zero pivots as a pseudo-inverse, so check the pivots too.
bool ill_conditioned(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
  if (ldlt.info() != Eigen::Success) return true;
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  return !(d.minCoeff() * kMaxCondition > d.maxCoeff()) || ldlt.rcond() < 1.0 / kMaxCondition;
}

// Gain P H^T S^-1 with S = H P H^T + diag(r), solved through an LDLT factorization.
Eigen::Matrix<double, kStateDim, Eigen::Dynamic> kalman_gain(const Mat27& p, const MatX27& h,
                                                             const Eigen::VectorXd& r) {
  const Eigen::Matrix<double, kStateDim, Eigen::Dynamic> pht = p * h.transpose();
  Eigen::MatrixXd s = h * pht;
  s.diagonal() += r;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ill_conditioned(ldlt))
    throw Error(ErrorCode::SingularInnovation, "innovation covariance is ill-conditioned");
  return ldlt.solve(pht.transpose()).transpose();
}

}  // namespace

void FilterConfig::validate() const {
  noise.validate();
  body.validate();
  if (!(p0_scale > 0)) throw Error(ErrorCode::InvalidArgument, "filter: p0_scale must be > 0");
  if (jacobian_terms < 1)
    throw Error(ErrorCode::InvalidArgument, "filter: jacobian_terms must be >= 1");
}

Beliefd initial_belief(const PoseStated& mu, const FilterConfig& cfg) {
  return {mu, cfg.p0_scale * Mat27::Identity()};
}

Beliefd predict(const Beliefd& b, const ImuFrame& imu, double dt, const FilterConfig& cfg) {
  const Vec27 w = omega(b.mu, imu, dt);
  const Mat27 jr = state_right_jacobian(w, cfg.jacobian_terms);
  const Mat27 f = state_adjoint(state_exp(-w)) + jr * script_C(b.mu, imu, dt);

  Beliefd out;
  out.mu = perturb(b.mu, w);
  out.cov = f * b.cov * f.transpose() + jr * process_Q(cfg.noise, dt) * jr.transpose();
  symmetrize(out.cov);
  check_finite(out, "predict");
  return out;
}

Beliefd measurement_update(const Beliefd& b, const ImuFrame& imu, const FilterConfig& cfg,
                           double* innovation_norm) {
  const Measurement m = assemble_measurement(b.mu, imu, cfg.noise, cfg.body);
  const auto k = kalman_gain(b.cov, m.H, m.r_diag);
  const Vec27 nu = k * m.innovation;
  if (innovation_norm) *innovation_norm = m.innovation.norm();

  Mat27 i_kh;
  if (cfg.limiter) {
    const Eigen::Index rows = m.H.rows();
    MatX27 h_aug(rows + 18, kStateDim);
    h_aug << m.H, H_lim();
    Eigen::VectorXd r_aug(rows + 18);
    r_aug << m.r_diag, cfg.noise.sigma_lim2;
    i_kh = Mat27::Identity() - kalman_gain(b.cov, h_aug, r_aug) * h_aug;
  } else {
    i_kh = Mat27::Identity() - k * m.H;
  }

  const Mat27 jr = state_right_jacobian(nu, cfg.jacobian_terms);
  Beliefd out;
  out.mu = perturb(b.mu, nu);
  out.cov = jr * i_kh * b.cov * jr.transpose();
  symmetrize(out.cov);
  check_finite(out, "measurement_update");
  return out;
}

Beliefd constraint_update(const Beliefd& b, const FilterConfig& cfg, ConstraintSet* active) {
  ConstraintSet cs = assemble_constraints(b.mu, cfg.body);
  const Eigen::Matrix<double, kStateDim, Eigen::Dynamic> pct = b.cov * cs.C.transpose();
  Eigen::MatrixXd g = cs.C * pct;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ill_conditioned(ldlt)) {
    g.diagonal().array() += 1e-12 * g.trace();
    ldlt.compute(g);
    if (ill_conditioned(ldlt))
      throw Error(ErrorCode::SingularConstraintGram, "constraint Gram matrix is singular");
  }
  const Vec27 nu = pct * ldlt.solve(cs.residual);

  Beliefd out{perturb(b.mu, nu), b.cov};
  check_finite(out, "constraint_update");
  if (active) *active = std::move(cs);
  return out;
}

FilterResult run_filter(std::span<const ImuFrame> frames, const Beliefd& init,
                        const FilterConfig& cfg) {
  if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "run_filter: no frames");
  cfg.validate();

  FilterResult out;
  out.trajectory.reserve(frames.size());
  out.trace.reserve(frames.size());
  Beliefd b = init;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    try {
      FrameRecord rec;
      if (k > 0) {
        const double dt = frames[k].t - frames[k - 1].t;
        if (!(dt > 0))
          throw Error(ErrorCode::InvalidArgument, "timestamps must be strictly increasing");
        b = predict(b, frames[k - 1], dt, cfg);
      }
      rec.predicted = b.mu;
      b = measurement_update(b, frames[k], cfg, &rec.innovation_norm);
      rec.measured = b.mu;

      if (cfg.diagnostics) {
        const Eigen::SelfAdjointEigenSolver<Mat27> eig(b.cov);
        if (cfg.clamp_eigenvalues && eig.eigenvalues().minCoeff() < 0) {
          const Vec27 lambda = eig.eigenvalues().cwiseMax(0.0);
          b.cov = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
          symmetrize(b.cov);
        }
        rec.cov_min_eig = Eigen::SelfAdjointEigenSolver<Mat27>(b.cov, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
      }

      ConstraintSet cs;
      b = constraint_update(b, cfg, &cs);
      rec.constrained = b.mu;
      rec.correction_norm = state_minus(rec.constrained, rec.measured).norm();
      rec.rom_active = cs.rom_active;
      rec.cov_trace = b.cov.trace();

      out.trajectory.push_back(b.mu);
      out.trace.push_back(std::move(rec));
    } catch (const Error& e) {
      throw e.at_frame(k);
    }
  }
  out.final_cov = b.cov;
  return out;
}

}  // namespace lgpose
