// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "piou/assignment.hpp"
#include "piou/geometry.hpp"

namespace piou {

struct HeatmapSpec {
  Box box;
  Metric metric = Metric::kPseudoIou;
  double scale = 1.0;  // scaled-box only
  int grid = 64;

  void validate() const;
};

/// Metric sampled on a grid x grid lattice whose outer nodes lie on the box
/// edges, so corner and edge cells carry the exact boundary values.
struct HeatmapGrid {
  int grid = 0;
  std::vector<double> values;  // row-major, top row first

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * grid + col]; }
};

HeatmapGrid sample_heatmap(const HeatmapSpec& spec);

/// Standalone SVG with one rect per cell (value in a data-v attribute) and a
/// colour legend.
std::string render_heatmap_svg(const HeatmapSpec& spec);

}  // namespace piou
