// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace piou {

/// Category of a failure. Each code maps to a stable, machine-parseable
/// tag used in CLI diagnostics.
enum class ErrorCode {
  kInvalidBox,
  kOutOfBox,
  kInvalidParameter,
  kInvalidConfig,
  kInvalidLabel,
  kInvalidPrediction,
  kInvalidInput,
  kConsistency,
  kParse,
  kSchema,
  kIo,
};

std::string_view error_tag(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidBox: return "invalid-box";
    case ErrorCode::kOutOfBox: return "out-of-box";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kInvalidPrediction: return "invalid-prediction";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kConsistency: return "consistency";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace piou
