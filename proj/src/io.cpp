// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include "lgpose/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "lgpose/metrics.hpp"

namespace lgpose {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCsvMagic = "# lgpose-csv v1";
constexpr double kDeg = 180.0 / std::numbers::pi;

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::Schema, what); }

// ---------------------------------------------------------------- config

class Section {
 public:
  Section(const json& root, const char* name, std::initializer_list<const char*> keys)
      : name_(name) {
    if (!root.contains(name)) return;
    node_ = &root.at(name);
    if (!node_->is_object()) schema_error(std::string(name) + ": expected an object");
    for (const auto& [key, value] : node_->items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) schema_error(name_ + ": unknown key '" + key + "'");
    }
  }

  void get(const char* key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) schema_error(path(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void get(const char* key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) schema_error(path(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void get(const char* key, std::uint64_t& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) schema_error(path(key) + ": expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void get(const char* key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) schema_error(path(key) + ": expected a boolean");
      out = v->get<bool>();
    }
  }

  void get(const char* key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) schema_error(path(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  // A number is broadcast to every entry; an array must have the exact length.
  template <int N>
  void get(const char* key, Eigen::Matrix<double, N, 1>& out) const {
    const json* v = find(key);
    if (!v) return;
    if (v->is_number()) {
      out.setConstant(v->get<double>());
      return;
    }
    if (!v->is_array() || v->size() != std::size_t(N))
      schema_error(path(key) + ": expected a number or an array of " + std::to_string(N));
    for (int i = 0; i < N; ++i) {
      if (!(*v)[i].is_number()) schema_error(path(key) + ": array entries must be numbers");
      out(i) = (*v)[i].get<double>();
    }
  }

 private:
  const json* find(const char* key) const {
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }
  std::string path(const char* key) const { return name_ + "." + key; }

  std::string name_;
  const json* node_ = nullptr;
};

PathKind parse_path(const std::string& s) {
  if (s == "straight") return PathKind::Straight;
  if (s == "figure-eight") return PathKind::FigureEight;
  if (s == "turn-in-place") return PathKind::TurnInPlace;
  schema_error("gait.path: expected straight, figure-eight or turn-in-place");
}

// ---------------------------------------------------------------- csv

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line_no) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    schema_error("line " + std::to_string(line_no) + ": cannot parse number '" + std::string(s) +
                 "'");
  return v;
}

struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const fs::path& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.substr(0, std::string(kCsvMagic).size()) != kCsvMagic)
    schema_error(path.string() + ": missing '" + kCsvMagic + "' header");

  CsvTable table;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key, value;
      meta >> key >> value;
      table.meta[key] = value;
      continue;
    }
    const auto fields = split(line);
    if (!have_header) {
      if (fields.size() != columns.size())
        schema_error(path.string() + ": expected " + std::to_string(columns.size()) + " columns");
      for (std::size_t i = 0; i < columns.size(); ++i)
        if (fields[i] != columns[i])
          schema_error(path.string() + ": column " + std::to_string(i) + " should be '" +
                       columns[i] + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != columns.size())
      schema_error(path.string() + ": line " + std::to_string(line_no) + " has " +
                   std::to_string(fields.size()) + " fields");
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) row[i] = parse_double(fields[i], line_no);
    table.rows.push_back(std::move(row));
  }
  if (!have_header) schema_error(path.string() + ": missing header row");
  if (table.rows.empty()) schema_error(path.string() + ": no data rows");
  return table;
}

void append_row(std::string& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += fmt(row[i]);
  }
  out += '\n';
}

std::string header_line(const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  return out + '\n';
}

void push_quaternion(std::vector<double>& row, const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0) q.coeffs() = -q.coeffs();
  row.insert(row.end(), {q.w(), q.x(), q.y(), q.z()});
}

Mat3 read_quaternion(const std::vector<double>& row, std::size_t at) {
  Eigen::Quaterniond q(row[at], row[at + 1], row[at + 2], row[at + 3]);
  if (!(q.norm() > 0.5)) schema_error("quaternion with near-zero norm");
  return q.normalized().toRotationMatrix();
}

const char* kSegmentPrefix[3] = {"p", "ls", "rs"};

}  // namespace

// ---------------------------------------------------------------- config

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("config must be a JSON object");
  for (const auto& [key, value] : root.items())
    if (key != "body" && key != "noise" && key != "filter" && key != "gait" &&
        key != "sensor_noise")
      schema_error("unknown top-level key '" + key + "'");

  RunConfig cfg;
  BodyParams& body = cfg.filter.body;
  const Section b(root, "body",
                  {"d_pelvis", "d_lthigh", "d_rthigh", "d_lshank", "d_rshank", "z_pelvis",
                   "z_floor", "knee_rom_min_deg", "knee_rom_max_deg"});
  b.get("d_pelvis", body.d_pelvis);
  b.get("d_lthigh", body.d_lthigh);
  b.get("d_rthigh", body.d_rthigh);
  b.get("d_lshank", body.d_lshank);
  b.get("d_rshank", body.d_rshank);
  b.get("z_pelvis", body.z_pelvis);
  b.get("z_floor", body.z_floor);
  double rom_min = body.knee_rom_min * kDeg, rom_max = body.knee_rom_max * kDeg;
  b.get("knee_rom_min_deg", rom_min);
  b.get("knee_rom_max_deg", rom_max);
  body.knee_rom_min = rom_min / kDeg;
  body.knee_rom_max = rom_max / kDeg;

  NoiseParams& noise = cfg.filter.noise;
  const Section n(root, "noise",
                  {"sigma_acc2", "sigma_qori2", "sigma_ori2", "sigma_mp2", "sigma_ls2",
                   "sigma_rs2", "sigma_lim2"});
  n.get("sigma_acc2", noise.sigma_acc2);
  n.get("sigma_qori2", noise.sigma_qori2);
  n.get("sigma_ori2", noise.sigma_ori2);
  n.get("sigma_mp2", noise.sigma_mp2);
  n.get("sigma_ls2", noise.sigma_ls2);
  n.get("sigma_rs2", noise.sigma_rs2);
  n.get("sigma_lim2", noise.sigma_lim2);

  const Section f(root, "filter", {"p0_scale", "jacobian_terms", "limiter"});
  f.get("p0_scale", cfg.filter.p0_scale);
  f.get("jacobian_terms", cfg.filter.jacobian_terms);
  f.get("limiter", cfg.filter.limiter);

  GaitParams& gait = cfg.gait;
  const Section g(root, "gait",
                  {"stride_length", "cadence", "step_height", "duration", "sample_rate", "duty",
                   "path", "path_radius", "turn_rate", "seed"});
  g.get("stride_length", gait.stride_length);
  g.get("cadence", gait.cadence);
  g.get("step_height", gait.step_height);
  g.get("duration", gait.duration);
  g.get("sample_rate", gait.sample_rate);
  g.get("duty", gait.duty);
  std::string path = "straight";
  g.get("path", path);
  gait.path = parse_path(path);
  g.get("path_radius", gait.path_radius);
  g.get("turn_rate", gait.turn_rate);
  g.get("seed", gait.seed);
  gait.body = body;

  const Section s(root, "sensor_noise", {"acc_var", "ori_var"});
  s.get("acc_var", cfg.sensor.acc_var);
  s.get("ori_var", cfg.sensor.ori_var);
  if (!(cfg.sensor.acc_var >= 0) || !(cfg.sensor.ori_var >= 0))
    schema_error("sensor_noise: variances must be >= 0");

  try {
    cfg.filter.validate();
    cfg.gait.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------- csv

std::vector<std::string> imu_columns() {
  std::vector<std::string> c{"t"};
  for (const char* s : kSegmentPrefix)
    for (const char* a : {"x", "y", "z"}) c.push_back(std::string("a") + s + "_" + a);
  for (const char* s : kSegmentPrefix)
    for (const char* a : {"w", "x", "y", "z"}) c.push_back(std::string("q") + s + "_" + a);
  c.insert(c.end(), {"fc_l", "fc_r"});
  return c;
}

std::vector<std::string> pose_columns() {
  std::vector<std::string> c{"t"};
  for (const char* s : kSegmentPrefix)
    for (const char* f : {"x", "y", "z", "qw", "qx", "qy", "qz", "vx", "vy", "vz"})
      c.push_back(std::string(s) + "_" + f);
  c.insert(c.end(), {"knee_l", "knee_r", "hip_l_y", "hip_l_x", "hip_l_z", "hip_r_y", "hip_r_x",
                     "hip_r_z"});
  return c;
}

void write_imu_csv(const fs::path& path, const std::vector<ImuFrame>& frames) {
  std::string out = std::string(kCsvMagic) + '\n' + header_line(imu_columns());
  std::vector<double> row;
  for (const ImuFrame& f : frames) {
    row.assign({f.t});
    for (const Vec3& a : f.acc) row.insert(row.end(), {a.x(), a.y(), a.z()});
    for (const Mat3& r : f.rot) push_quaternion(row, r);
    row.insert(row.end(), {double(f.fc_left), double(f.fc_right)});
    append_row(out, row);
  }
  write_file_atomic(path, out);
}

std::vector<ImuFrame> read_imu_csv(const fs::path& path) {
  const CsvTable table = read_csv(path, imu_columns());
  std::vector<ImuFrame> frames(table.rows.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& row = table.rows[k];
    ImuFrame& f = frames[k];
    f.t = row[0];
    for (int b = 0; b < 3; ++b) {
      f.acc[b] = Vec3(row[1 + 3 * b], row[2 + 3 * b], row[3 + 3 * b]);
      f.rot[b] = read_quaternion(row, 10 + 4 * b);
    }
    f.fc_left = row[22] != 0;
    f.fc_right = row[23] != 0;
    if (k > 0 && !(f.t > frames[k - 1].t))
      schema_error(path.string() + ": timestamps must be strictly increasing");
  }
  return frames;
}

void write_pose_csv(const fs::path& path, const PoseTable& table) {
  std::string out = std::string(kCsvMagic) + '\n';
  if (table.runtime_ms) out += "# runtime_ms " + fmt(*table.runtime_ms) + '\n';
  out += header_line(pose_columns());
  std::vector<double> row;
  for (const PoseRow& r : table.rows) {
    row.assign({r.t});
    for (int b = 0; b < 3; ++b) {
      const Pose3d& p = r.x.pose[b];
      row.insert(row.end(), {p.t.x(), p.t.y(), p.t.z()});
      push_quaternion(row, p.r);
      row.insert(row.end(), {r.x.vel[b].x(), r.x.vel[b].y(), r.x.vel[b].z()});
    }
    row.insert(row.end(), {r.angles.knee[0] * kDeg, r.angles.knee[1] * kDeg});
    for (const Vec3& h : r.angles.hip) row.insert(row.end(), {h.x() * kDeg, h.y() * kDeg, h.z() * kDeg});
    append_row(out, row);
  }
  write_file_atomic(path, out);
}

PoseTable read_pose_csv(const fs::path& path) {
  const CsvTable csv = read_csv(path, pose_columns());
  PoseTable table;
  if (auto it = csv.meta.find("runtime_ms"); it != csv.meta.end())
    table.runtime_ms = parse_double(it->second, 0);
  table.rows.resize(csv.rows.size());
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    const auto& row = csv.rows[k];
    PoseRow& r = table.rows[k];
    r.t = row[0];
    for (int b = 0; b < 3; ++b) {
      const std::size_t at = 1 + 10 * b;
      r.x.pose[b].t = Vec3(row[at], row[at + 1], row[at + 2]);
      r.x.pose[b].r = read_quaternion(row, at + 3);
      r.x.vel[b] = Vec3(row[at + 7], row[at + 8], row[at + 9]);
    }
    r.angles.knee = {row[31] / kDeg, row[32] / kDeg};
    r.angles.hip[0] = Vec3(row[33], row[34], row[35]) / kDeg;
    r.angles.hip[1] = Vec3(row[36], row[37], row[38]) / kDeg;
  }
  return table;
}

std::vector<PoseRow> pose_rows(const std::vector<double>& t, const std::vector<PoseStated>& states,
                               const BodyParams& body) {
  if (t.size() != states.size())
    throw Error(ErrorCode::LengthMismatch, "pose_rows: times and states differ in length");
  std::vector<PoseRow> rows(t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    rows[k] = {t[k], states[k], joint_angles(states[k], body)};
  return rows;
}

// ---------------------------------------------------------------- metrics

MetricsReport evaluate(const PoseTable& est, const PoseTable& ref) {
  const std::size_t n = ref.rows.size();
  if (est.rows.size() != n)
    throw Error(ErrorCode::LengthMismatch, "eval: estimate and reference row counts differ");
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(est.rows[k].t - ref.rows[k].t) > 1e-6)
      throw Error(ErrorCode::LengthMismatch,
                  "eval: timestamps disagree at row " + std::to_string(k));

  using Getter = double (*)(const PoseRow&);
  const std::pair<const char*, Getter> angles[] = {
      {"knee_l", [](const PoseRow& r) { return r.angles.knee[0]; }},
      {"knee_r", [](const PoseRow& r) { return r.angles.knee[1]; }},
      {"hip_l_y", [](const PoseRow& r) { return r.angles.hip[0].x(); }},
      {"hip_l_x", [](const PoseRow& r) { return r.angles.hip[0].y(); }},
      {"hip_l_z", [](const PoseRow& r) { return r.angles.hip[0].z(); }},
      {"hip_r_y", [](const PoseRow& r) { return r.angles.hip[1].x(); }},
      {"hip_r_x", [](const PoseRow& r) { return r.angles.hip[1].y(); }},
      {"hip_r_z", [](const PoseRow& r) { return r.angles.hip[1].z(); }},
  };

  MetricsReport report;
  report.runtime_ms = est.runtime_ms;
  std::vector<double> e(n), r(n);
  for (const auto& [name, get] : angles) {
    for (std::size_t k = 0; k < n; ++k) {
      e[k] = get(est.rows[k]) * kDeg;
      r[k] = get(ref.rows[k]) * kDeg;
    }
    report.rmse_deg[name] = rmse_bias_removed(e, r);
    report.cc[name] = pearson_cc(e, r);
  }

  std::vector<Vec3> pe(n), pr(n);
  for (Side side : {Side::Left, Side::Right}) {
    const int s = shank_of(side);
    for (std::size_t k = 0; k < n; ++k) {
      pe[k] = est.rows[k].x.pose[s].t;
      pr[k] = ref.rows[k].x.pose[s].t;
    }
    double dev = std::numeric_limits<double>::quiet_NaN();
    try {
      dev = ttd_deviation(pe, pr);
    } catch (const Error& e) {
      // A reference ankle that never moves has no distance to compare against.
      if (e.code() != ErrorCode::ZeroReferenceDistance) throw;
    }
    report.ttd_dev_pct[side == Side::Left ? "ankle_l" : "ankle_r"] = dev;
  }
  return report;
}

void write_metrics_json(const fs::path& path, const MetricsReport& report) {
  auto section = [](const std::map<std::string, double>& values) {
    json j = json::object();
    for (const auto& [k, v] : values) j[k] = std::isfinite(v) ? json(v) : json(nullptr);
    return j;
  };
  json root;
  root["rmse_deg"] = section(report.rmse_deg);
  root["cc"] = section(report.cc);
  root["ttd_dev_pct"] = section(report.ttd_dev_pct);
  root["runtime_ms"] = report.runtime_ms ? json(*report.runtime_ms) : json(nullptr);
  write_file_atomic(path, root.dump(2) + '\n');
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace lgpose
