// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "piou/geometry.hpp"

namespace piou {

/// Half-open size interval (min_size, max_size] in pixels.
struct SizeRange {
  double min_size = 0.0;
  double max_size = 0.0;
};

struct PyramidLevel {
  int level_index = 3;
  std::optional<SizeRange> regression_range;

  int stride() const noexcept { return 1 << level_index; }
};

/// Feature-pyramid layout over one input image.
struct PyramidConfig {
  std::vector<PyramidLevel> levels;
  int image_width = 0;
  int image_height = 0;

  /// Levels 3..7 (strides 8..128) without regression ranges.
  static PyramidConfig standard(int image_width, int image_height);
  /// Levels from a list of power-of-two strides, e.g. {8, 16, 32}.
  static PyramidConfig from_strides(std::span<const int> strides, int image_width,
                                    int image_height);

  /// Throws Error(kInvalidConfig) on non-positive image dimensions, unsorted or
  /// out-of-range levels, or an empty regression range.
  void validate() const;
  const PyramidLevel& level(int level_index) const;
};

struct PointSample {
  int level_index = 0;
  int grid_i = 0;  // column
  int grid_j = 0;  // row
  Point image_point;

  friend bool operator==(const PointSample&, const PointSample&) = default;
};

/// Offset of a grid point inside its stride cell, as a fraction of the stride.
inline constexpr double kCellCenterOffset = 0.5;

/// ceil(extent / stride)
int grid_extent(int extent, int stride);

/// Every feature-map location projected to the image: (stride/2 + i*stride,
/// stride/2 + j*stride), with the last partial row/column placed at the centre
/// of its cell clipped to the image. Ordered by level, then row, then column.
std::vector<PointSample> generate_points(const PyramidConfig& cfg);

/// True when `level_index` has no regression range or max(w, h) of `box` lies
/// in that level's (min_size, max_size].
bool level_filter(const Box& box, const PyramidConfig& cfg, int level_index);

}  // namespace piou
