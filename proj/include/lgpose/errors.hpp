// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace lgpose {

enum class ErrorCode {
  NonSkewInput,
  MalformedAlgebra,
  NearPiRotation,
  DegenerateProjection,
  NonFiniteState,
  SingularInnovation,
  SingularConstraintGram,
  InfeasibleGait,
  LengthMismatch,
  ZeroReferenceDistance,
  InvalidArgument,
  Schema,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSkewInput: return "NonSkewInput";
    case ErrorCode::MalformedAlgebra: return "MalformedAlgebra";
    case ErrorCode::NearPiRotation: return "NearPiRotation";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::SingularConstraintGram: return "SingularConstraintGram";
    case ErrorCode::InfeasibleGait: return "InfeasibleGait";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroReferenceDistance: return "ZeroReferenceDistance";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

// Single exception type for the library; `code()` tells callers what failed.
// Filter errors raised inside run_filter carry the index of the offending frame.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> frame() const noexcept { return frame_; }

  Error at_frame(std::size_t frame) const {
    Error e(*this);
    e.frame_ = frame;
    return e;
  }

 private:
  ErrorCode code_;
  std::optional<std::size_t> frame_;
};

}  // namespace lgpose
