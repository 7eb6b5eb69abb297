// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "piou/assignment.hpp"
#include "piou/scene.hpp"

namespace piou::cli {

/// Everything a subcommand needs. Populated from flags, with a JSON config
/// file filling in whatever the flags leave unset.
struct RunConfig {
  std::string annotations;
  std::string format = "coco";  // coco | voc | synth
  std::string metric = "pseudo-iou";
  double threshold = 0.4;
  double scale = 0.6;
  std::vector<int> strides{8, 16, 32, 64, 128};
  std::string image_size = "native";  // native | WxH | SHORT:LONG
  std::vector<double> thresholds{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  int grid = 64;
  int cases = 1000;
  int resolution = 1024;
  std::uint64_t seed = 42;
  int scenes = 100;
  std::string out = ".";
  std::vector<double> box;  // heatmap: x_min, y_min, x_max, y_max
  std::string detections;
  double score_threshold = 0.05;
  double nms_threshold = 0.5;
  std::optional<std::size_t> pre_nms_top_k;
};

/// Loads annotations per cfg.format and applies the image-size policy.
SceneSet load_scenes(const RunConfig& cfg);

/// Rescales images and boxes according to a policy string.
SceneSet apply_image_size(SceneSet scenes, const std::string& policy);

int cmd_assign(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_heatmap(const RunConfig& cfg);
int cmd_oracle_check(const RunConfig& cfg);
int cmd_postprocess(const RunConfig& cfg);

/// Full entry point: parses arguments, dispatches, and turns errors into a
/// one-line "piou: error[<tag>]: <message>" diagnostic and a nonzero status.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace piou::cli
