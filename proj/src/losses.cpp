// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/losses.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

void LossConfig::validate() const {
  // alpha = 1 is admitted so the loss can reduce to plain cross-entropy.
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("alpha {} outside (0, 1]", alpha));
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("gamma {} must be >= 0", gamma));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("lambda {} must be > 0", lambda));
  }
  if (!(epsilon > 0.0 && epsilon <= 1e-3)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("epsilon {} outside (0, 1e-3]", epsilon));
  }
}

void LtrbPrediction::validate() const {
  if (!(l > 0.0 && r > 0.0 && t > 0.0 && b > 0.0) ||
      !std::isfinite(l + r + t + b)) {
    throw Error(ErrorCode::kInvalidPrediction,
                fmt::format("prediction ({}, {}, {}, {}) must be strictly positive", l, r, t, b));
  }
}

ScalarLoss focal_loss(double p, int label, const LossConfig& cfg) {
  cfg.validate();
  if (label != 0 && label != 1) {
    throw Error(ErrorCode::kInvalidLabel, fmt::format("label {} is not 0 or 1", label));
  }
  if (std::isnan(p)) throw Error(ErrorCode::kInvalidInput, "probability is NaN");

  const double clamped = std::clamp(p, cfg.epsilon, 1.0 - cfg.epsilon);
  const bool active = clamped == p;
  const double sign = label == 1 ? 1.0 : -1.0;
  const double pt = label == 1 ? clamped : 1.0 - clamped;
  const double alpha_t = label == 1 ? cfg.alpha : 1.0 - cfg.alpha;

  const double miss = 1.0 - pt;
  const double log_pt = std::log(pt);
  const double modulator = std::pow(miss, cfg.gamma);

  ScalarLoss out;
  out.value = -alpha_t * modulator * log_pt;
  if (active) {
    // d/dpt [-(1-pt)^g ln pt] = g (1-pt)^(g-1) ln pt - (1-pt)^g / pt
    const double d_modulator = cfg.gamma == 0.0 ? 0.0 : cfg.gamma * std::pow(miss, cfg.gamma - 1.0);
    const double d_pt = alpha_t * (d_modulator * log_pt - modulator / pt);
    out.gradient = sign * d_pt;
  }
  return out;
}

LtrbLoss iou_loss(const LtrbPrediction& pred, const LtrbPrediction& target,
                  const LossConfig& cfg) {
  cfg.validate();
  pred.validate();
  target.validate();

  const double pred_w = pred.l + pred.r;
  const double pred_h = pred.t + pred.b;
  const double area_pred = pred_w * pred_h;
  const double area_target = (target.l + target.r) * (target.t + target.b);
  const double inter_w = std::min(pred.l, target.l) + std::min(pred.r, target.r);
  const double inter_h = std::min(pred.t, target.t) + std::min(pred.b, target.b);
  const double inter = inter_w * inter_h;
  const double uni = area_pred + area_target - inter;
  const double overlap = inter / uni;

  LtrbLoss out;
  if (overlap <= cfg.epsilon) {
    out.value = -std::log(cfg.epsilon);
    return out;
  }
  out.value = -std::log(overlap);

  // loss = ln(U) - ln(I); each side enters I only while it is the smaller one.
  auto side_gradient = [&](double p, double q, double inter_other, double pred_other) {
    const double d_inter = p < q ? inter_other : 0.0;
    const double d_union = pred_other - d_inter;
    return d_union / uni - d_inter / inter;
  };
  out.gradient.l = side_gradient(pred.l, target.l, inter_h, pred_h);
  out.gradient.r = side_gradient(pred.r, target.r, inter_h, pred_h);
  out.gradient.t = side_gradient(pred.t, target.t, inter_w, pred_w);
  out.gradient.b = side_gradient(pred.b, target.b, inter_w, pred_w);
  return out;
}

namespace {

// Overlap of [a0, a1] and [b0, b1] and its partial derivatives in a0, a1.
struct Span1d {
  double length = 0.0;
  double d_lo = 0.0;
  double d_hi = 0.0;
};

Span1d overlap_1d(double a0, double a1, double b0, double b1) {
  const double lo = std::max(a0, b0);
  const double hi = std::min(a1, b1);
  if (hi <= lo) return {};
  return {hi - lo, a0 > b0 ? -1.0 : 0.0, a1 < b1 ? 1.0 : 0.0};
}

Span1d hull_1d(double a0, double a1, double b0, double b1) {
  return {std::max(a1, b1) - std::min(a0, b0), a0 < b0 ? -1.0 : 0.0, a1 > b1 ? 1.0 : 0.0};
}

}  // namespace

BoxLoss giou_loss(const Box& pred_box, const Box& target_box) {
  require_valid(pred_box);
  require_valid(target_box);
  const Box& p = pred_box;
  const Box& q = target_box;

  const Span1d ix = overlap_1d(p.x_min, p.x_max, q.x_min, q.x_max);
  const Span1d iy = overlap_1d(p.y_min, p.y_max, q.y_min, q.y_max);
  const Span1d cx = hull_1d(p.x_min, p.x_max, q.x_min, q.x_max);
  const Span1d cy = hull_1d(p.y_min, p.y_max, q.y_min, q.y_max);

  const double pw = p.width();
  const double ph = p.height();
  const double inter = ix.length * iy.length;
  const double uni = pw * ph + q.area() - inter;
  const double hull = cx.length * cy.length;

  BoxLoss out;
  // GIoU = I/U - 1 + U/C
  out.value = 1.0 - (inter / uni - 1.0 + uni / hull);

  // Partials of I, U, C in (x_min, y_min, x_max, y_max) of the prediction.
  const std::array<double, 4> d_inter{ix.d_lo * iy.length, iy.d_lo * ix.length,
                                      ix.d_hi * iy.length, iy.d_hi * ix.length};
  const std::array<double, 4> d_area{-ph, -pw, ph, pw};
  const std::array<double, 4> d_hull{cx.d_lo * cy.length, cy.d_lo * cx.length,
                                     cx.d_hi * cy.length, cy.d_hi * cx.length};
  for (std::size_t k = 0; k < 4; ++k) {
    const double d_union = d_area[k] - d_inter[k];
    const double d_ratio = (d_inter[k] * uni - inter * d_union) / (uni * uni);
    const double d_fill = (d_union * hull - uni * d_hull[k]) / (hull * hull);
    out.gradient[k] = -(d_ratio + d_fill);
  }
  return out;
}

namespace {

// Neumaier compensated sum.
double compensated_sum(std::span<const double> values, const char* what) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("{} loss {} must be finite and non-negative", what, v));
    }
    const double next = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - next) + v : (v - next) + sum;
    sum = next;
  }
  return sum + carry;
}

}  // namespace

LossTerms total_loss(std::span<const double> classification, std::span<const double> regression,
                     std::size_t n_pos, const LossConfig& cfg) {
  cfg.validate();
  LossTerms terms;
  terms.classification = compensated_sum(classification, "classification");
  terms.regression = compensated_sum(regression, "regression");
  terms.n_pos = n_pos;
  if (n_pos == 0) {
    terms.total = terms.classification;
  } else {
    const double norm = static_cast<double>(n_pos);
    terms.total = terms.classification / norm + cfg.lambda * terms.regression / norm;
  }
  return terms;
}

Box decode_box(const Point& p, const LtrbPrediction& pred) {
  pred.validate();
  return Box::from_corners(p.x - pred.l, p.y - pred.t, p.x + pred.r, p.y + pred.b);
}

}  // namespace piou
