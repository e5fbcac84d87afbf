// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// lgpose simulate | estimate | eval
//
// Exit codes: 0 ok, 2 bad input or config, 3 infeasible gait, 4 numeric divergence.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lgpose/io.hpp"

namespace fs = std::filesystem;
using namespace lgpose;

namespace {

enum Exit { kOk = 0, kInput = 2, kInfeasible = 3, kDivergence = 4 };

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InfeasibleGait: return kInfeasible;
    case ErrorCode::NonFiniteState:
    case ErrorCode::SingularInnovation:
    case ErrorCode::SingularConstraintGram:
    case ErrorCode::NearPiRotation:
    case ErrorCode::DegenerateProjection: return kDivergence;
    default: return kInput;
  }
}

int report(const Error& e, const std::string& context) {
  if (e.frame())
    std::fprintf(stderr, "lgpose: %s: frame %zu: %s\n", context.c_str(), *e.frame(), e.what());
  else
    std::fprintf(stderr, "lgpose: %s: %s\n", context.c_str(), e.what());
  return exit_code(e);
}

// Straight legs hanging from the hips along the measured shank axes, at rest.
PoseStated default_start(const ImuFrame& f, const BodyParams& body) {
  PoseStated x;
  x.pose[kPelvis] = {f.rot[kPelvis], Vec3(0, 0, body.z_pelvis)};
  for (Side side : {Side::Left, Side::Right}) {
    const int s = shank_of(side);
    const double y = side == Side::Left ? body.d_pelvis / 2 : -body.d_pelvis / 2;
    const Vec3 hip = x.pose[kPelvis].r * Vec3(0, y, 0) + x.pose[kPelvis].t;
    x.pose[s] = {f.rot[s], hip - (body.thigh(side) + body.shank(side)) * f.rot[s].col(2)};
  }
  return x;
}

int cmd_simulate(const fs::path& config, const fs::path& out) {
  try {
    const RunConfig cfg = load_config(config);
    const GroundTruth truth = generate(cfg.gait);
    std::vector<PoseStated> states;
    states.reserve(truth.size());
    for (const auto& f : truth.frames) states.push_back(f.state);
    fs::create_directories(out);
    write_pose_csv(out / "truth.csv", {pose_rows(truth.t, states, cfg.gait.body), std::nullopt});
    write_imu_csv(out / "imu.csv", corrupt(truth, cfg.sensor, cfg.gait.seed));
  } catch (const Error& e) {
    return report(e, "simulate");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lgpose: simulate: %s\n", e.what());
    return kInput;
  }
  return kOk;
}

int estimate_one(const fs::path& imu_path, const RunConfig& cfg,
                 const std::optional<PoseStated>& start, const fs::path& out) {
  try {
    const std::vector<ImuFrame> frames = read_imu_csv(imu_path);
    const PoseStated x0 = start ? *start : default_start(frames.front(), cfg.filter.body);

    const auto t0 = std::chrono::steady_clock::now();
    const FilterResult result = run_filter(frames, initial_belief(x0, cfg.filter), cfg.filter);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::vector<double> t(frames.size());
    std::transform(frames.begin(), frames.end(), t.begin(), [](const ImuFrame& f) { return f.t; });
    write_pose_csv(out, {pose_rows(t, result.trajectory, cfg.filter.body), ms});
  } catch (const Error& e) {
    return report(e, "estimate " + imu_path.string());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lgpose: estimate %s: %s\n", imu_path.string().c_str(), e.what());
    return kInput;
  }
  return kOk;
}

int cmd_estimate(const std::vector<fs::path>& imus, const fs::path& config,
                 const std::optional<fs::path>& init, const fs::path& out, unsigned jobs) {
  RunConfig cfg;
  std::optional<PoseStated> start;
  try {
    cfg = load_config(config);
    if (init) start = read_pose_csv(*init).rows.front().x;
  } catch (const Error& e) {
    return report(e, "estimate");
  }

  if (imus.size() == 1) return estimate_one(imus.front(), cfg, start, out);

  // Batch: `out` is a directory receiving <stem>.est.csv per input.
  try {
    fs::create_directories(out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lgpose: estimate: %s\n", e.what());
    return kInput;
  }
  std::vector<int> codes(imus.size(), kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < imus.size();) {
      const fs::path dest = out / (imus[i].stem().string() + ".est.csv");
      codes[i] = estimate_one(imus[i], cfg, start, dest);
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, unsigned(imus.size())));
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  return *std::max_element(codes.begin(), codes.end());
}

int cmd_eval(const fs::path& est, const fs::path& ref, const fs::path& out) {
  try {
    write_metrics_json(out, evaluate(read_pose_csv(est), read_pose_csv(ref)));
  } catch (const Error& e) {
    report(e, "eval");
    return kInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lgpose: eval: %s\n", e.what());
    return kInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower-body pose estimation from three IMUs"};
  app.require_subcommand(1);

  fs::path sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "Generate synthetic truth.csv and imu.csv");
  sim->add_option("--config", sim_config, "Run configuration (JSON)")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();

  std::vector<fs::path> est_imu;
  fs::path est_config, est_out;
  std::optional<fs::path> est_init;
  unsigned jobs = 1;
  auto* est = app.add_subcommand("estimate", "Run the filter over IMU recordings");
  est->add_option("--imu", est_imu, "imu.csv input; repeat for a batch")->required();
  est->add_option("--config", est_config, "Run configuration (JSON)")->required();
  est->add_option("--out", est_out, "est.csv output, or a directory for a batch")->required();
  est->add_option("--init", est_init, "Pose CSV whose first row is the initial state");
  est->add_option("--jobs", jobs, "Worker threads for a batch")->check(CLI::PositiveNumber);

  fs::path ev_est, ev_ref, ev_out;
  auto* ev = app.add_subcommand("eval", "Compare an estimate against a reference");
  ev->add_option("--est", ev_est, "Estimated pose CSV")->required();
  ev->add_option("--ref", ev_ref, "Reference pose CSV")->required();
  ev->add_option("--out", ev_out, "Metrics JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  if (*sim) return cmd_simulate(sim_config, sim_out);
  if (*est) return cmd_estimate(est_imu, est_config, est_init, est_out, jobs);
  return cmd_eval(ev_est, ev_ref, ev_out);
}
