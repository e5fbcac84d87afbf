// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Run configuration (JSON) and the versioned CSV formats. Every CSV starts with
// "# lgpose-csv v1", may carry further "# key value" comment lines, then a header row.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgpose/filter.hpp"
#include "lgpose/gait.hpp"

namespace lgpose {

struct RunConfig {
  FilterConfig filter;
  GaitParams gait;  // gait.body mirrors filter.body
  SensorNoise sensor;
};

// Missing keys keep their defaults; unknown keys and wrong types raise Schema errors.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

struct PoseRow {
  double t = 0;
  PoseStated x;
  JointAngles angles;  // radians in memory, degrees on disk
};

struct PoseTable {
  std::vector<PoseRow> rows;
  std::optional<double> runtime_ms;
};

std::vector<std::string> imu_columns();
std::vector<std::string> pose_columns();

void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuFrame>& frames);
std::vector<ImuFrame> read_imu_csv(const std::filesystem::path& path);

void write_pose_csv(const std::filesystem::path& path, const PoseTable& table);
PoseTable read_pose_csv(const std::filesystem::path& path);

// Pose rows for a trajectory, with joint angles computed from each state.
std::vector<PoseRow> pose_rows(const std::vector<double>& t,
                               const std::vector<PoseStated>& states, const BodyParams& body);

struct MetricsReport {
  std::map<std::string, double> rmse_deg;
  std::map<std::string, double> cc;
  std::map<std::string, double> ttd_dev_pct;
  std::optional<double> runtime_ms;
};

// Requires equal row counts and timestamps within 1e-6 s.
MetricsReport evaluate(const PoseTable& est, const PoseTable& ref);
void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report);

// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace lgpose
