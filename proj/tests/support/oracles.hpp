// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. None of these call into the code paths
// they are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "piou/geometry.hpp"
#include "piou/postprocess.hpp"
#include "piou/random.hpp"

namespace piou::testing {

/// Pseudo-IoU from the point's offsets alone. Along each axis the two boxes
/// share the far half, so the overlap is w/2 + min(l, r); with
/// s = (1/2 + min(l,r)/w)(1/2 + min(t,b)/h) the intersection is s*w*h and the
/// union (2 - s)*w*h.
inline double closed_form_pseudo_iou(double l, double r, double t, double b) {
  const double w = l + r;
  const double h = t + b;
  const double s = (0.5 + std::min(l, r) / w) * (0.5 + std::min(t, b) / h);
  return s / (2.0 - s);
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double step = 1e-5) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

/// |a - b| / max(|a|, |b|, floor); the floor keeps exact zeros comparable.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Greedy NMS written as "keep a detection unless a kept one of its group
/// overlaps it", visiting detections by (score desc, index asc).
inline std::vector<Detection> reference_nms(std::span<const Detection> dets, double threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score != dets[b].score ? dets[a].score > dets[b].score : a < b;
  });
  auto overlap = [](const Box& a, const Box& b) {
    const double iw = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double ih = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = iw * ih;
    return inter / ((a.x_max - a.x_min) * (a.y_max - a.y_min) +
                    (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter);
  };
  std::vector<Detection> kept;
  for (std::size_t idx : order) {
    const Detection& d = dets[idx];
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.image_id == d.image_id && k.category == d.category &&
          overlap(k.box, d.box) > threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

/// Random box with log-uniform sides and a point drawn uniformly inside it.
struct BoxAndPoint {
  Box box;
  Point point;
};

inline BoxAndPoint random_box_and_point(Rng& rng) {
  const double w = rng.log_uniform(0.5, 2000.0);
  const double h = rng.log_uniform(0.5, 2000.0);
  const double x0 = rng.uniform(-1000.0, 1000.0);
  const double y0 = rng.uniform(-1000.0, 1000.0);
  const Box box{x0, y0, x0 + w, y0 + h};
  Point p{x0 + rng.uniform() * w, y0 + rng.uniform() * h};
  p.x = std::min(p.x, box.x_max);
  p.y = std::min(p.y, box.y_max);
  return {box, p};
}

}  // namespace piou::testing
