// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "piou/geometry.hpp"

namespace piou {

struct LossConfig {
  double alpha = 0.25;
  double gamma = 2.0;
  double lambda = 1.0;  // weight of the regression term
  double epsilon = 1e-7;

  void validate() const;
};

/// Predicted (or target) distances from a point to the four box sides.
struct LtrbPrediction {
  double l = 0.0;
  double r = 0.0;
  double t = 0.0;
  double b = 0.0;

  void validate() const;
};

/// A loss value and its derivative with respect to the scalar input.
struct ScalarLoss {
  double value = 0.0;
  double gradient = 0.0;
};

struct LtrbLoss {
  double value = 0.0;
  LtrbPrediction gradient;  // d loss / d (l, r, t, b)
};

struct BoxLoss {
  double value = 0.0;
  std::array<double, 4> gradient{};  // d loss / d (x_min, y_min, x_max, y_max)
};

struct LossTerms {
  double classification = 0.0;  // un-normalised sum
  double regression = 0.0;      // un-normalised sum
  double total = 0.0;           // classification/N + lambda*regression/N
  std::size_t n_pos = 0;
};

/// -alpha_t (1 - p_t)^gamma log(p_t), with p clamped to [eps, 1 - eps].
/// `label` must be 0 or 1. The gradient is d/dp and is zero where clamping
/// is active.
ScalarLoss focal_loss(double p, int label, const LossConfig& cfg);

/// -ln(max(IoU, eps)) of two boxes decoded at a shared point.
LtrbLoss iou_loss(const LtrbPrediction& pred, const LtrbPrediction& target,
                  const LossConfig& cfg);

/// 1 - GIoU, with gradient with respect to the predicted box corners.
BoxLoss giou_loss(const Box& pred_box, const Box& target_box);

/// Combines per-point losses. `regression` holds losses of positive points
/// only. With n_pos = 0 the classification sum is normalised by 1 and the
/// regression term is dropped.
LossTerms total_loss(std::span<const double> classification, std::span<const double> regression,
                     std::size_t n_pos, const LossConfig& cfg);

/// Box with corners (x - l, y - t, x + r, y + b).
Box decode_box(const Point& p, const LtrbPrediction& pred);

}  // namespace piou
