// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#include "lgpose/metrics.hpp"

#include <cmath>
#include <limits>

namespace lgpose {

namespace {

template <typename T>
void check_lengths(std::span<const T> a, std::span<const T> b, const char* what) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, std::string(what) + ": series lengths differ");
  if (a.size() < 2)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": need at least two samples");
}

}  // namespace

// Welford updates keep a single pass numerically stable.
double rmse_bias_removed(std::span<const double> est, std::span<const double> ref) {
  check_lengths(est, ref, "rmse_bias_removed");
  double mean = 0, m2 = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double e = est[i] - ref[i];
    const double delta = e - mean;
    mean += delta / double(i + 1);
    m2 += delta * (e - mean);
  }
  return std::sqrt(m2 / double(est.size()));
}

double pearson_cc(std::span<const double> est, std::span<const double> ref) {
  check_lengths(est, ref, "pearson_cc");
  double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double n = double(i + 1);
    const double dx = est[i] - mx, dy = ref[i] - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (est[i] - mx);
    syy += dy * (ref[i] - my);
    sxy += dx * (ref[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double ttd_deviation(std::span<const Vec3> est, std::span<const Vec3> ref) {
  check_lengths(est, ref, "ttd_deviation");
  double len_est = 0, len_ref = 0;
  for (std::size_t i = 1; i < est.size(); ++i) {
    len_est += (est[i] - est[i - 1]).norm();
    len_ref += (ref[i] - ref[i - 1]).norm();
  }
  if (len_ref == 0)
    throw Error(ErrorCode::ZeroReferenceDistance, "ttd_deviation: reference path has zero length");
  return std::abs(len_est - len_ref) / len_ref * 100;
}

}  // namespace lgpose
