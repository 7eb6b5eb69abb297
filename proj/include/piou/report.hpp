// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "piou/assignment.hpp"
#include "piou/postprocess.hpp"

namespace piou {

inline constexpr int kStatsSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct ImageAssignment {
  std::int64_t image_id = 0;
  int width = 0;
  int height = 0;
  Assignment assignment;
  AssignmentStats stats;
};

struct RunDescription {
  Metric metric = Metric::kPseudoIou;
  double parameter = 0.0;
  std::vector<int> strides;
  std::string source;
};

/// Stats report (schema_version 1): run description, per-image stats and the
/// aggregate over all images.
std::string stats_to_json(const RunDescription& run, std::span<const ImageAssignment> images);

/// Header: image_id,level,i,j,x,y,label,gt_index,v. label is 1 or -1;
/// gt_index is -1 for negatives.
std::string labels_to_csv(std::span<const ImageAssignment> images);

struct SweepEntry {
  double threshold = 0.0;
  AssignmentStats stats;
};

std::string sweep_to_json(const RunDescription& run, std::span<const SweepEntry> entries);

/// Detection CSV with header image_id,category,score,x_min,y_min,x_max,y_max.
std::vector<Detection> parse_detections_csv(std::string_view text);
std::string detections_to_csv(std::span<const Detection> dets);

/// COCO result records: [{"image_id", "category_id", "bbox": [x, y, w, h], "score"}].
std::vector<Detection> parse_detections_json(std::string_view text);
std::string detections_to_json(std::span<const Detection> dets);

}  // namespace piou
