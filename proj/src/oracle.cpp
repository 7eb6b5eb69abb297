// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "piou/errors.hpp"
#include "piou/random.hpp"

namespace piou::oracle {

namespace {

void require_resolution(int resolution) {
  if (resolution < 16) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("oracle resolution {} must be >= 16", resolution));
  }
}

}  // namespace

double raster_iou(const Box& a, const Box& b, int resolution) {
  require_valid(a);
  require_valid(b);
  require_resolution(resolution);
  const double x0 = std::min(a.x_min, b.x_min);
  const double y0 = std::min(a.y_min, b.y_min);
  const double cell_w = (std::max(a.x_max, b.x_max) - x0) / resolution;
  const double cell_h = (std::max(a.y_max, b.y_max) - y0) / resolution;

  std::vector<double> xs(resolution);
  for (int i = 0; i < resolution; ++i) xs[i] = x0 + (i + 0.5) * cell_w;

  long long in_a = 0;
  long long in_b = 0;
  long long in_both = 0;
  for (int j = 0; j < resolution; ++j) {
    const double y = y0 + (j + 0.5) * cell_h;
    const bool row_a = y >= a.y_min && y < a.y_max;
    const bool row_b = y >= b.y_min && y < b.y_max;
    for (int i = 0; i < resolution; ++i) {
      const double x = xs[i];
      const bool pa = row_a && x >= a.x_min && x < a.x_max;
      const bool pb = row_b && x >= b.x_min && x < b.x_max;
      in_a += pa;
      in_b += pb;
      in_both += pa && pb;
    }
  }
  const long long uni = in_a + in_b - in_both;
  return uni == 0 ? 0.0 : static_cast<double>(in_both) / static_cast<double>(uni);
}

double raster_pseudo_iou(const Point& p, const Box& gt, int resolution) {
  require_valid(gt);
  const Box pseudo{p.x - 0.5 * gt.width(), p.y - 0.5 * gt.height(), p.x + 0.5 * gt.width(),
                   p.y + 0.5 * gt.height()};
  return raster_iou(pseudo, gt, resolution);
}

double tolerance(int resolution) { return 2e-3 * 1024.0 / resolution; }

CheckReport run_check(int cases, int resolution, std::uint64_t seed) {
  if (cases < 1) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("case count {} must be >= 1", cases));
  }
  require_resolution(resolution);

  CheckReport report;
  report.cases = cases;
  report.resolution = resolution;
  report.seed = seed;
  report.tolerance = tolerance(resolution);
  Rng rng(seed);
  for (int n = 0; n < cases; ++n) {
    const double w = rng.log_uniform(1.0, 1000.0);
    const double h = rng.log_uniform(1.0, 1000.0);
    const Box box = Box::from_center(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0), w, h);
    const Point p{box.x_min + rng.uniform() * w, box.y_min + rng.uniform() * h};
    if (!box.contains(p)) continue;
    const double deviation =
        std::abs(pseudo_iou(p, box) - raster_pseudo_iou(p, box, resolution));
    if (deviation > report.max_deviation || n == 0) {
      report.max_deviation = deviation;
      report.worst_point = p;
      report.worst_box = box;
    }
  }
  report.passed = report.max_deviation <= report.tolerance;
  return report;
}

}  // namespace piou::oracle
