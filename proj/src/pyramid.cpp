// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/pyramid.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

PyramidConfig PyramidConfig::standard(int image_width, int image_height) {
  PyramidConfig cfg;
  for (int l = 3; l <= 7; ++l) cfg.levels.push_back({l, std::nullopt});
  cfg.image_width = image_width;
  cfg.image_height = image_height;
  cfg.validate();
  return cfg;
}

PyramidConfig PyramidConfig::from_strides(std::span<const int> strides, int image_width,
                                          int image_height) {
  PyramidConfig cfg;
  for (int stride : strides) {
    if (stride < 2 || !std::has_single_bit(static_cast<unsigned>(stride))) {
      throw Error(ErrorCode::kInvalidConfig,
                  fmt::format("stride {} is not a power of two >= 2", stride));
    }
    cfg.levels.push_back({std::countr_zero(static_cast<unsigned>(stride)), std::nullopt});
  }
  cfg.image_width = image_width;
  cfg.image_height = image_height;
  cfg.validate();
  return cfg;
}

void PyramidConfig::validate() const {
  if (image_width <= 0 || image_height <= 0) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("image dimensions {}x{} must be positive", image_width,
                            image_height));
  }
  if (levels.empty()) throw Error(ErrorCode::kInvalidConfig, "pyramid has no levels");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const PyramidLevel& lvl = levels[k];
    if (lvl.level_index < 1 || lvl.level_index > 30) {
      throw Error(ErrorCode::kInvalidConfig,
                  fmt::format("level index {} outside [1, 30]", lvl.level_index));
    }
    if (k > 0 && lvl.level_index <= levels[k - 1].level_index) {
      throw Error(ErrorCode::kInvalidConfig, "pyramid strides must be strictly increasing");
    }
    if (lvl.regression_range &&
        !(lvl.regression_range->min_size >= 0.0 &&
          lvl.regression_range->max_size > lvl.regression_range->min_size)) {
      throw Error(ErrorCode::kInvalidConfig,
                  fmt::format("level {} has an empty regression range", lvl.level_index));
    }
  }
}

const PyramidLevel& PyramidConfig::level(int level_index) const {
  auto it = std::find_if(levels.begin(), levels.end(), [&](const PyramidLevel& l) {
    return l.level_index == level_index;
  });
  if (it == levels.end()) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("level {} is not configured", level_index));
  }
  return *it;
}

int grid_extent(int extent, int stride) { return (extent + stride - 1) / stride; }

namespace {

double cell_center(int index, int stride, int extent) {
  const double start = static_cast<double>(index) * stride;
  const double full = start + kCellCenterOffset * stride;
  if (start + stride <= extent) return full;
  // partial trailing cell
  return start + kCellCenterOffset * (extent - start);
}

}  // namespace

std::vector<PointSample> generate_points(const PyramidConfig& cfg) {
  cfg.validate();
  std::size_t total = 0;
  for (const PyramidLevel& lvl : cfg.levels) {
    total += static_cast<std::size_t>(grid_extent(cfg.image_width, lvl.stride())) *
             grid_extent(cfg.image_height, lvl.stride());
  }
  std::vector<PointSample> points;
  points.reserve(total);
  for (const PyramidLevel& lvl : cfg.levels) {
    const int stride = lvl.stride();
    const int cols = grid_extent(cfg.image_width, stride);
    const int rows = grid_extent(cfg.image_height, stride);
    for (int j = 0; j < rows; ++j) {
      const double y = cell_center(j, stride, cfg.image_height);
      for (int i = 0; i < cols; ++i) {
        points.push_back({lvl.level_index, i, j, {cell_center(i, stride, cfg.image_width), y}});
      }
    }
  }
  return points;
}

bool level_filter(const Box& box, const PyramidConfig& cfg, int level_index) {
  require_valid(box);
  const PyramidLevel& lvl = cfg.level(level_index);
  if (!lvl.regression_range) return true;
  const double extent = std::max(box.width(), box.height());
  return extent > lvl.regression_range->min_size && extent <= lvl.regression_range->max_size;
}

}  // namespace piou
