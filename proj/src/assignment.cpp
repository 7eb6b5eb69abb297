// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/assignment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

std::string_view metric_name(Metric metric) noexcept {
  switch (metric) {
    case Metric::kPseudoIou: return "pseudo-iou";
    case Metric::kCenterness: return "centerness";
    case Metric::kScaledBox: return "scaled-box";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "pseudo-iou") return Metric::kPseudoIou;
  if (name == "centerness") return Metric::kCenterness;
  if (name == "scaled-box") return Metric::kScaledBox;
  throw Error(ErrorCode::kInvalidParameter, fmt::format("unknown metric '{}'", name));
}

void AssignmentRule::validate() const {
  if (metric == Metric::kScaledBox) {
    if (!(parameter > 0.0 && parameter <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  fmt::format("scaled-box scale {} outside (0, 1]", parameter));
    }
  } else if (!(parameter >= 0.0 && parameter <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("{} threshold {} outside [0, 1]", metric_name(metric), parameter));
  }
}

std::size_t Assignment::dropped_gt_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(clipped_boxes.begin(), clipped_boxes.end(), std::nullopt));
}

double AssignmentStats::zero_positive_fraction() const noexcept {
  const std::size_t retained = retained_gt();
  return retained == 0 ? 0.0 : static_cast<double>(zero_positive_gt) / retained;
}

AssignmentStats& AssignmentStats::operator+=(const AssignmentStats& other) {
  total_points += other.total_points;
  positive += other.positive;
  negative += other.negative;
  n_pos += other.n_pos;
  per_gt_positive.insert(per_gt_positive.end(), other.per_gt_positive.begin(),
                         other.per_gt_positive.end());
  zero_positive_gt += other.zero_positive_gt;
  dropped_gt += other.dropped_gt;
  return *this;
}

namespace {

struct PointScore {
  bool inside = false;  // inside at least one eligible box
  int best = kNoMatch;
  double value = 0.0;
};

struct PreparedScene {
  std::vector<std::optional<Box>> clipped;
  // eligible[level position][gt]
  std::vector<std::vector<char>> eligible;
};

PreparedScene prepare(std::span<const GroundTruth> gts, const PyramidConfig& cfg) {
  cfg.validate();
  PreparedScene scene;
  scene.clipped.reserve(gts.size());
  for (const GroundTruth& gt : gts) {
    require_valid(gt.box);
    scene.clipped.push_back(clip_to_image(gt.box, cfg.image_width, cfg.image_height));
  }
  for (const PyramidLevel& lvl : cfg.levels) {
    std::vector<char> row(gts.size(), 0);
    for (std::size_t k = 0; k < gts.size(); ++k) {
      row[k] = scene.clipped[k] && level_filter(*scene.clipped[k], cfg, lvl.level_index);
    }
    scene.eligible.push_back(std::move(row));
  }
  return scene;
}

std::size_t level_position(const PyramidConfig& cfg, int level_index) {
  for (std::size_t k = 0; k < cfg.levels.size(); ++k) {
    if (cfg.levels[k].level_index == level_index) return k;
  }
  throw Error(ErrorCode::kInvalidConfig,
              fmt::format("point references unconfigured level {}", level_index));
}

// Best eligible box for one point under a value metric or the scaled-box rule.
PointScore score_point(const PointSample& sample, const PreparedScene& scene,
                       std::size_t level_pos, const AssignmentRule& rule) {
  PointScore score;
  double best_area = 0.0;
  const Point& p = sample.image_point;
  const std::vector<char>& eligible = scene.eligible[level_pos];
  for (std::size_t k = 0; k < scene.clipped.size(); ++k) {
    if (!eligible[k]) continue;
    const Box& box = *scene.clipped[k];
    double value = 0.0;
    if (rule.metric == Metric::kScaledBox) {
      if (!in_scaled_box(p, box, rule.parameter)) continue;
      value = 1.0;
    } else {
      if (!box.contains(p)) continue;
      value = rule.metric == Metric::kPseudoIou ? pseudo_iou(p, box) : centerness(p, box);
    }
    const double area = box.area();
    if (!score.inside || value > score.value ||
        (value == score.value && area < best_area)) {
      score.inside = true;
      score.best = static_cast<int>(k);
      score.value = value;
      best_area = area;
    }
  }
  return score;
}

std::vector<PointScore> score_points(std::span<const PointSample> points,
                                     const PreparedScene& scene, const PyramidConfig& cfg,
                                     const AssignmentRule& rule) {
  std::vector<PointScore> scores;
  scores.reserve(points.size());
  for (const PointSample& sample : points) {
    scores.push_back(score_point(sample, scene, level_position(cfg, sample.level_index), rule));
  }
  return scores;
}

Assignment label(std::span<const PointSample> points, std::span<const PointScore> scores,
                 const PreparedScene& scene, const AssignmentRule& rule) {
  Assignment out;
  out.clipped_boxes = scene.clipped;
  out.points.reserve(points.size());
  const bool thresholded = rule.metric != Metric::kScaledBox;
  for (std::size_t n = 0; n < points.size(); ++n) {
    const PointScore& s = scores[n];
    PointLabel pl;
    pl.sample = points[n];
    pl.value = s.value;
    pl.positive = s.inside && (!thresholded || s.value >= rule.parameter);
    pl.gt_index = pl.positive ? s.best : kNoMatch;
    out.points.push_back(pl);
  }
  return out;
}

}  // namespace

Assignment assign(std::span<const PointSample> points, std::span<const GroundTruth> gts,
                  const AssignmentRule& rule, const PyramidConfig& cfg) {
  rule.validate();
  const PreparedScene scene = prepare(gts, cfg);
  const std::vector<PointScore> scores = score_points(points, scene, cfg, rule);
  return label(points, scores, scene, rule);
}

AssignmentStats compute_stats(const Assignment& assignment, std::span<const GroundTruth> gts) {
  if (assignment.clipped_boxes.size() != gts.size()) {
    throw Error(ErrorCode::kConsistency,
                fmt::format("assignment was built against {} ground truths, got {}",
                            assignment.clipped_boxes.size(), gts.size()));
  }
  AssignmentStats stats;
  stats.total_points = assignment.points.size();
  stats.per_gt_positive.assign(gts.size(), 0);
  for (const PointLabel& pl : assignment.points) {
    if (!pl.positive) continue;
    if (pl.gt_index < 0 || static_cast<std::size_t>(pl.gt_index) >= gts.size() ||
        !assignment.clipped_boxes[pl.gt_index] ||
        !assignment.clipped_boxes[pl.gt_index]->contains(pl.sample.image_point) ||
        !gts[pl.gt_index].box.contains(pl.sample.image_point)) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("positive point at ({}, {}) has no matching ground truth {}",
                              pl.sample.image_point.x, pl.sample.image_point.y, pl.gt_index));
    }
    ++stats.per_gt_positive[pl.gt_index];
    ++stats.positive;
  }
  stats.negative = stats.total_points - stats.positive;
  stats.n_pos = stats.positive;
  stats.dropped_gt = assignment.dropped_gt_count();
  for (std::size_t k = 0; k < gts.size(); ++k) {
    if (assignment.clipped_boxes[k] && stats.per_gt_positive[k] == 0) ++stats.zero_positive_gt;
  }
  return stats;
}

std::vector<AssignmentStats> sweep_thresholds(std::span<const PointSample> points,
                                              std::span<const GroundTruth> gts, Metric metric,
                                              std::span<const double> thresholds,
                                              const PyramidConfig& cfg) {
  if (metric == Metric::kScaledBox) {
    throw Error(ErrorCode::kInvalidParameter,
                "threshold sweeps need a thresholded metric (pseudo-iou or centerness)");
  }
  if (thresholds.empty()) throw Error(ErrorCode::kInvalidParameter, "threshold list is empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::kInvalidParameter, "thresholds must be sorted ascending");
  }
  for (double t : thresholds) AssignmentRule{metric, t}.validate();

  const PreparedScene scene = prepare(gts, cfg);
  const std::vector<PointScore> scores =
      score_points(points, scene, cfg, AssignmentRule{metric, thresholds.front()});
  std::vector<AssignmentStats> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    out.push_back(compute_stats(label(points, scores, scene, {metric, t}), gts));
  }
  return out;
}

}  // namespace piou
