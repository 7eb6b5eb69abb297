// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "piou/pyramid.hpp"
#include "piou/scene.hpp"

namespace piou {

enum class Metric { kPseudoIou, kCenterness, kScaledBox };

std::string_view metric_name(Metric metric) noexcept;
/// Accepts "pseudo-iou", "centerness" and "scaled-box".
Metric parse_metric(std::string_view name);

/// Metric plus its parameter: threshold T in [0, 1] for pseudo-iou and
/// centerness, shrink scale s in (0, 1] for scaled-box.
struct AssignmentRule {
  Metric metric = Metric::kPseudoIou;
  double parameter = 0.4;

  static AssignmentRule pseudo_iou(double threshold) { return {Metric::kPseudoIou, threshold}; }
  static AssignmentRule centerness(double threshold) { return {Metric::kCenterness, threshold}; }
  static AssignmentRule scaled_box(double scale) { return {Metric::kScaledBox, scale}; }

  void validate() const;
};

inline constexpr int kNoMatch = -1;

struct PointLabel {
  PointSample sample;
  bool positive = false;
  int gt_index = kNoMatch;  // set only for positives
  double value = 0.0;       // metric value v; 0 outside every box

  friend bool operator==(const PointLabel&, const PointLabel&) = default;
};

struct Assignment {
  std::vector<PointLabel> points;
  /// Ground-truth boxes after clipping to the image; empty entries were dropped.
  std::vector<std::optional<Box>> clipped_boxes;

  std::size_t dropped_gt_count() const noexcept;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct AssignmentStats {
  std::size_t total_points = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t n_pos = 0;
  /// One entry per input ground truth, in input order.
  std::vector<std::size_t> per_gt_positive;
  /// Retained (not dropped) ground truths that received no positive point.
  std::size_t zero_positive_gt = 0;
  std::size_t dropped_gt = 0;

  std::size_t retained_gt() const noexcept { return per_gt_positive.size() - dropped_gt; }
  double zero_positive_fraction() const noexcept;

  /// Sums counts and concatenates per-gt histograms.
  AssignmentStats& operator+=(const AssignmentStats& other);
  friend bool operator==(const AssignmentStats&, const AssignmentStats&) = default;
};

/// Labels every point. A point's value is the best metric value over the
/// ground truths that contain it (closed membership) and pass the level
/// filter; ties go to the smaller box, then the lower index. The point is
/// positive when it lies in at least one such box and v >= T. Under the
/// scaled-box rule a point is positive inside any shrunk box (v = 1) and is
/// matched to the smallest one.
Assignment assign(std::span<const PointSample> points, std::span<const GroundTruth> gts,
                  const AssignmentRule& rule, const PyramidConfig& cfg);

AssignmentStats compute_stats(const Assignment& assignment, std::span<const GroundTruth> gts);

/// One AssignmentStats per threshold, for a thresholded metric (pseudo-iou or
/// centerness). Thresholds must be non-empty and sorted ascending.
std::vector<AssignmentStats> sweep_thresholds(std::span<const PointSample> points,
                                              std::span<const GroundTruth> gts, Metric metric,
                                              std::span<const double> thresholds,
                                              const PyramidConfig& cfg);

}  // namespace piou
