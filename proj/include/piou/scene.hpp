// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "piou/geometry.hpp"

namespace piou {

struct GroundTruth {
  Box box;
  int category = 0;
  std::int64_t image_id = 0;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct ImageInfo {
  std::int64_t id = 0;
  int width = 0;
  int height = 0;
  std::string file_name;
  std::vector<GroundTruth> objects;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

struct Category {
  int id = 0;
  std::string name;

  friend bool operator==(const Category&, const Category&) = default;
};

/// Annotations that a loader skipped, by reason.
struct DropCounts {
  std::size_t zero_area = 0;
  std::size_t out_of_image = 0;
  std::size_t crowd = 0;
  std::size_t difficult = 0;

  std::size_t total() const noexcept { return zero_area + out_of_image + crowd + difficult; }
  friend bool operator==(const DropCounts&, const DropCounts&) = default;
};

struct SceneSet {
  std::vector<ImageInfo> images;
  std::vector<Category> categories;
  DropCounts dropped;

  std::size_t box_count() const noexcept;
  friend bool operator==(const SceneSet&, const SceneSet&) = default;
};

/// Intersects `box` with [0, width] x [0, height]. Returns nullopt when nothing
/// of positive area remains.
std::optional<Box> clip_to_image(const Box& box, int width, int height);

}  // namespace piou
