// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "piou/geometry.hpp"

namespace piou {

struct Detection {
  Box box;
  double score = 0.0;
  int category = 0;
  std::int64_t image_id = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr double kDefaultScoreThreshold = 0.05;
inline constexpr double kDefaultNmsThreshold = 0.5;

/// Keeps detections with score >= threshold, in input order.
std::vector<Detection> score_filter(std::span<const Detection> dets, double threshold);

struct NmsOptions {
  double iou_threshold = kDefaultNmsThreshold;
  /// When set, only the top-k scoring candidates of each (image, category)
  /// group enter suppression.
  std::optional<std::size_t> pre_nms_top_k;
};

/// Greedy suppression within each (image, category) group: the best remaining
/// detection is kept and every other one with IoU > threshold against it is
/// removed. Output is sorted by descending score, ties by input position.
std::vector<Detection> nms(std::span<const Detection> dets, const NmsOptions& options = {});

}  // namespace piou
