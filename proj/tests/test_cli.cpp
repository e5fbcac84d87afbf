// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Drives the lgpose executable end to end through the shell.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lgpose/io.hpp"

namespace lgpose {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lgpose_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(LGPOSE_CLI) + " " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return dir_ / name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::size_t data_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        header = true;
        continue;
      }
      ++n;
    }
    return n;
  }

  std::string q(const fs::path& p) const { return "'" + p.string() + "'"; }

  fs::path dir_;
};

TEST_F(Cli, SimulateEstimateEvalRoundTrip) {
  const fs::path cfg = write("cfg.json", R"({"gait": {"duration": 10, "seed": 4}})");
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --out " + q(dir_ / "sim")), 0) << slurp(dir_ / "stderr");
  const fs::path truth = dir_ / "sim" / "truth.csv", imu = dir_ / "sim" / "imu.csv";
  ASSERT_TRUE(fs::exists(truth) && fs::exists(imu));
  EXPECT_EQ(data_rows(truth), 1000u);
  EXPECT_EQ(data_rows(imu), 1000u);
  EXPECT_EQ(slurp(imu).rfind("# lgpose-csv v1\nt,ap_x,ap_y,ap_z,", 0), 0u);
  EXPECT_EQ(slurp(truth).rfind("# lgpose-csv v1\nt,p_x,p_y,p_z,p_qw,", 0), 0u);

  // Same seed, byte-identical files.
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --out " + q(dir_ / "sim2")), 0);
  EXPECT_EQ(slurp(dir_ / "sim2" / "truth.csv"), slurp(truth));
  EXPECT_EQ(slurp(dir_ / "sim2" / "imu.csv"), slurp(imu));

  const fs::path est = dir_ / "est.csv";
  ASSERT_EQ(run("estimate --imu " + q(imu) + " --config " + q(cfg) + " --init " + q(truth) +
                " --out " + q(est)),
            0)
      << slurp(dir_ / "stderr");
  EXPECT_EQ(data_rows(est), 1000u);
  EXPECT_TRUE(read_pose_csv(est).runtime_ms.has_value());

  const fs::path metrics = dir_ / "metrics.json";
  ASSERT_EQ(run("eval --est " + q(est) + " --ref " + q(truth) + " --out " + q(metrics)), 0)
      << slurp(dir_ / "stderr");
  const auto j = nlohmann::json::parse(slurp(metrics));
  for (const char* key : {"knee_l", "knee_r", "hip_l_y", "hip_l_x", "hip_l_z", "hip_r_y",
                          "hip_r_x", "hip_r_z"}) {
    ASSERT_TRUE(j["rmse_deg"].contains(key)) << key;
    ASSERT_TRUE(j["cc"].contains(key)) << key;
  }
  EXPECT_LT(j["rmse_deg"]["knee_l"].get<double>(), 5.0);
  EXPECT_GT(j["cc"]["knee_l"].get<double>(), 0.9);
  EXPECT_TRUE(j["ttd_dev_pct"].contains("ankle_l"));
  EXPECT_TRUE(j["ttd_dev_pct"].contains("ankle_r"));
  EXPECT_TRUE(j["runtime_ms"].is_number());

  // Reference against itself.
  ASSERT_EQ(run("eval --est " + q(truth) + " --ref " + q(truth) + " --out " + q(metrics)), 0);
  const auto self = nlohmann::json::parse(slurp(metrics));
  EXPECT_EQ(self["rmse_deg"]["knee_l"].get<double>(), 0.0);
  EXPECT_EQ(self["ttd_dev_pct"]["ankle_r"].get<double>(), 0.0);
}

TEST_F(Cli, EstimateWithoutInitAndBatch) {
  const fs::path cfg = write("cfg.json", R"({"gait": {"duration": 3}})");
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --out " + q(dir_ / "a")), 0);
  fs::copy_file(dir_ / "a" / "imu.csv", dir_ / "second.csv");
  ASSERT_EQ(run("estimate --imu " + q(dir_ / "a" / "imu.csv") + " --config " + q(cfg) +
                " --out " + q(dir_ / "single.csv")),
            0)
      << slurp(dir_ / "stderr");
  EXPECT_EQ(data_rows(dir_ / "single.csv"), 300u);

  ASSERT_EQ(run("estimate --imu " + q(dir_ / "a" / "imu.csv") + " --imu " + q(dir_ / "second.csv") +
                " --config " + q(cfg) + " --jobs 2 --out " + q(dir_ / "batch")),
            0)
      << slurp(dir_ / "stderr");
  const PoseTable a = read_pose_csv(dir_ / "batch" / "imu.est.csv");
  const PoseTable b = read_pose_csv(dir_ / "batch" / "second.est.csv");
  ASSERT_EQ(a.rows.size(), 300u);
  ASSERT_EQ(b.rows.size(), 300u);
  for (std::size_t k = 0; k < a.rows.size(); ++k)
    EXPECT_EQ(a.rows[k].x.pose[kPelvis].t, b.rows[k].x.pose[kPelvis].t);
}

TEST_F(Cli, ExitCodes) {
  const fs::path good = write("good.json", R"({"gait": {"duration": 1}})");
  const fs::path unknown = write("unknown.json", R"({"gait": {"speed": 1}})");
  const fs::path far = write("far.json", R"({"gait": {"duration": 2, "stride_length": 3.0}})");

  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("simulate --config " + q(unknown) + " --out " + q(dir_ / "x")), 2);
  EXPECT_EQ(run("simulate --config " + q(dir_ / "missing.json") + " --out " + q(dir_ / "x")), 2);
  EXPECT_EQ(run("simulate --config " + q(far) + " --out " + q(dir_ / "x")), 3);

  // Header only: no data rows.
  std::string header = "# lgpose-csv v1\n";
  for (const auto& c : imu_columns()) header += c + (c == "fc_r" ? "\n" : ",");
  const fs::path empty = write("empty.csv", header);
  EXPECT_EQ(run("estimate --imu " + q(empty) + " --config " + q(good) + " --out " + q(dir_ / "e.csv")), 2);

  // A non-finite acceleration sample diverges the filter on the next frame.
  std::vector<ImuFrame> frames(10);
  for (std::size_t k = 0; k < frames.size(); ++k) frames[k].t = 0.01 * double(k);
  frames[4].acc[0].x() = std::numeric_limits<double>::quiet_NaN();
  write_imu_csv(dir_ / "nan.csv", frames);
  EXPECT_EQ(run("estimate --imu " + q(dir_ / "nan.csv") + " --config " + q(good) + " --out " +
                q(dir_ / "n.csv")),
            4);
  EXPECT_NE(slurp(dir_ / "stderr").find("frame 5"), std::string::npos) << slurp(dir_ / "stderr");
  EXPECT_FALSE(fs::exists(dir_ / "n.csv"));

  // Misaligned series.
  ASSERT_EQ(run("simulate --config " + q(good) + " --out " + q(dir_ / "s1")), 0);
  const fs::path longer = write("longer.json", R"({"gait": {"duration": 2}})");
  ASSERT_EQ(run("simulate --config " + q(longer) + " --out " + q(dir_ / "s2")), 0);
  EXPECT_EQ(run("eval --est " + q(dir_ / "s1" / "truth.csv") + " --ref " +
                q(dir_ / "s2" / "truth.csv") + " --out " + q(dir_ / "m.json")),
            2);
}

}  // namespace
}  // namespace lgpose
