// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "piou/geometry.hpp"

namespace piou::oracle {

/// IoU estimated by counting cell centres of a resolution x resolution grid
/// laid over the smallest box enclosing both inputs.
double raster_iou(const Box& a, const Box& b, int resolution);

/// raster_iou between `gt` and the same-sized box centred on `p`.
double raster_pseudo_iou(const Point& p, const Box& gt, int resolution);

/// Accepted |exact - raster| deviation: 2e-3 at resolution 1024, scaled as
/// 1/resolution.
double tolerance(int resolution);

struct CheckReport {
  int cases = 0;
  int resolution = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  Point worst_point;
  Box worst_box;
  bool passed = false;
};

/// Compares pseudo_iou against raster_pseudo_iou on `cases` seeded random
/// (box, point-in-box) pairs. Requires cases >= 1 and resolution >= 16.
CheckReport run_check(int cases, int resolution, std::uint64_t seed);

}  // namespace piou::oracle
