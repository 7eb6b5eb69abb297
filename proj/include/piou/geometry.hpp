// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

namespace piou {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in continuous image coordinates, stored as corners.
/// A valid box has strictly positive width and height; use Box::from_corners
/// or Box::from_center to get a checked instance.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  static Box from_corners(double x_min, double y_min, double x_max, double y_max);
  static Box from_center(double x_c, double y_c, double w, double h);

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }
  double center_x() const noexcept { return 0.5 * (x_min + x_max); }
  double center_y() const noexcept { return 0.5 * (y_min + y_max); }
  Point center() const noexcept { return {center_x(), center_y()}; }

  /// (x_c, y_c, w, h)
  std::array<double, 4> to_center_form() const noexcept {
    return {center_x(), center_y(), width(), height()};
  }

  bool is_valid() const noexcept;
  /// Closed membership: points on the boundary count as inside.
  bool contains(const Point& p) const noexcept;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Distances from a point to the left, right, top and bottom sides of a box.
/// Components are negative on the sides the point lies beyond.
struct SideDistances {
  double l = 0.0;
  double r = 0.0;
  double t = 0.0;
  double b = 0.0;

  bool all_non_negative() const noexcept {
    return l >= 0.0 && r >= 0.0 && t >= 0.0 && b >= 0.0;
  }
};

/// Throws Error(kInvalidBox) when the box has non-positive width or height
/// or a non-finite coordinate.
void require_valid(const Box& box);

SideDistances side_distances(const Point& p, const Box& box);

double iou(const Box& a, const Box& b);
double giou(const Box& a, const Box& b);

/// IoU between the ground-truth box and a same-sized box centred on `p`.
/// Requires `p` inside the closed box; the result lies in [1/7, 1].
double pseudo_iou(const Point& p, const Box& box);

/// sqrt(min(l,r)/max(l,r) * min(t,b)/max(t,b)); requires `p` in the closed box.
double centerness(const Point& p, const Box& box);

/// Strict membership in the box shrunk by `scale` about its centre.
/// `scale` must lie in (0, 1].
bool in_scaled_box(const Point& p, const Box& box, double scale);

inline constexpr double kPseudoIouMin = 1.0 / 7.0;

}  // namespace piou
