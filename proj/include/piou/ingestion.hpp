// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "piou/scene.hpp"

namespace piou {

struct CocoOptions {
  bool include_crowd = false;
};

/// Reads a COCO-style annotation file (images / annotations / categories).
/// bbox [x, y, w, h] becomes corners (x, y, x + w, y + h), clipped to the
/// image. Zero-area, out-of-image and crowd annotations are dropped and
/// counted in SceneSet::dropped.
SceneSet load_coco(const std::filesystem::path& path, const CocoOptions& options = {});
SceneSet parse_coco(std::string_view json_text, const CocoOptions& options = {});

struct VocOptions {
  bool include_difficult = false;
};

/// Reads one VOC XML file, or every *.xml in a directory (sorted by name).
/// Pixel corners are 1-based: xmin/ymin lose 1, xmax/ymax are kept.
/// Image ids follow file order; category ids follow first appearance.
SceneSet load_voc(const std::filesystem::path& path, const VocOptions& options = {});

struct SynthParams {
  int min_image_size = 300;
  int max_image_size = 500;
  int min_objects = 1;
  int max_objects = 6;
  /// Box side as a fraction of the image side, drawn log-uniformly.
  double min_box_fraction = 0.05;
  double max_box_fraction = 0.8;
  /// Upper bound on width/height ratio, drawn log-uniformly in [1/r, r].
  double max_aspect_ratio = 3.0;
  int category_count = 20;

  void validate() const;
};

/// Deterministic VOC-like scenes from an explicit seed.
SceneSet synth_scenes(std::uint64_t seed, int count, const SynthParams& params = {});

inline constexpr int kSceneSchemaVersion = 1;

/// Normalised SceneSet JSON (schema_version 1).
std::string scene_to_json(const SceneSet& scenes);
SceneSet scene_from_json(std::string_view json_text);

/// 64-bit FNV-1a of the normalised JSON form.
std::uint64_t scene_checksum(const SceneSet& scenes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace piou
