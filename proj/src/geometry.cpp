// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

Box Box::from_corners(double x_min, double y_min, double x_max, double y_max) {
  Box box{x_min, y_min, x_max, y_max};
  require_valid(box);
  return box;
}

Box Box::from_center(double x_c, double y_c, double w, double h) {
  Box box{x_c - 0.5 * w, y_c - 0.5 * h, x_c + 0.5 * w, y_c + 0.5 * h};
  require_valid(box);
  return box;
}

bool Box::is_valid() const noexcept {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_max > x_min && y_max > y_min;
}

bool Box::contains(const Point& p) const noexcept {
  return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
}

void require_valid(const Box& box) {
  if (!box.is_valid()) {
    throw Error(ErrorCode::kInvalidBox,
                fmt::format("box ({}, {}, {}, {}) must have positive width and height",
                            box.x_min, box.y_min, box.x_max, box.y_max));
  }
}

SideDistances side_distances(const Point& p, const Box& box) {
  require_valid(box);
  // l = x - x_c + w/2 and friends, with x_c - w/2 folded into the stored corner.
  return {p.x - box.x_min, box.x_max - p.x, p.y - box.y_min, box.y_max - p.y};
}

namespace {

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

SideDistances inside_distances(const Point& p, const Box& box, const char* what) {
  const SideDistances d = side_distances(p, box);
  if (!d.all_non_negative()) {
    throw Error(ErrorCode::kOutOfBox,
                fmt::format("{}: point ({}, {}) lies outside box ({}, {}, {}, {})", what,
                            p.x, p.y, box.x_min, box.y_min, box.x_max, box.y_max));
  }
  return d;
}

}  // namespace

double iou(const Box& a, const Box& b) {
  require_valid(a);
  require_valid(b);
  const double inter = intersection_area(a, b);
  return inter / (a.area() + b.area() - inter);
}

double giou(const Box& a, const Box& b) {
  require_valid(a);
  require_valid(b);
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  const double hull = (std::max(a.x_max, b.x_max) - std::min(a.x_min, b.x_min)) *
                      (std::max(a.y_max, b.y_max) - std::min(a.y_min, b.y_min));
  return inter / uni - (hull - uni) / hull;
}

double pseudo_iou(const Point& p, const Box& box) {
  const SideDistances gt = inside_distances(p, box, "pseudo_iou");

  // The pseudo box is centred on p with the ground truth's extent.
  const double half_w = 0.5 * (gt.l + gt.r);
  const double half_h = 0.5 * (gt.t + gt.b);
  const SideDistances pseudo{half_w, half_w, half_h, half_h};
  const double area_gt = (gt.l + gt.r) * (gt.t + gt.b);
  const double area_pseudo = (pseudo.l + pseudo.r) * (pseudo.t + pseudo.b);

  // Both boxes share p, so the intersection is the side-wise minimum.
  const SideDistances inter{std::min(pseudo.l, gt.l), std::min(pseudo.r, gt.r),
                            std::min(pseudo.t, gt.t), std::min(pseudo.b, gt.b)};
  const double area_inter = (inter.l + inter.r) * (inter.t + inter.b);

  const double value = area_inter / (area_pseudo + area_gt - area_inter);
  // Mathematically in [1/7, 1]; clamp away last-ulp rounding.
  return std::clamp(value, kPseudoIouMin, 1.0);
}

double centerness(const Point& p, const Box& box) {
  const SideDistances d = inside_distances(p, box, "centerness");
  const double horizontal = std::min(d.l, d.r) / std::max(d.l, d.r);
  const double vertical = std::min(d.t, d.b) / std::max(d.t, d.b);
  return std::sqrt(horizontal * vertical);
}

bool in_scaled_box(const Point& p, const Box& box, double scale) {
  require_valid(box);
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("scale {} outside (0, 1]", scale));
  }
  return std::abs(p.x - box.center_x()) < 0.5 * scale * box.width() &&
         std::abs(p.y - box.center_y()) < 0.5 * scale * box.height();
}

}  // namespace piou
