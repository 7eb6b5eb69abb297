// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/postprocess.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

namespace {

void require_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("{} {} outside [0, 1]", what, value));
  }
}

}  // namespace

std::vector<Detection> score_filter(std::span<const Detection> dets, double threshold) {
  require_unit(threshold, "score threshold");
  std::vector<Detection> kept;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(kept),
               [&](const Detection& d) { return d.score >= threshold; });
  return kept;
}

std::vector<Detection> nms(std::span<const Detection> dets, const NmsOptions& options) {
  require_unit(options.iou_threshold, "nms threshold");
  for (const Detection& d : dets) {
    require_valid(d.box);
    require_unit(d.score, "detection score");
  }

  // Stable order: descending score, then input position.
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  std::map<std::pair<std::int64_t, int>, std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    auto& group = groups[{dets[idx].image_id, dets[idx].category}];
    if (!options.pre_nms_top_k || group.size() < *options.pre_nms_top_k) group.push_back(idx);
  }

  std::vector<std::size_t> kept;
  for (const auto& [key, candidates] : groups) {
    std::vector<char> suppressed(candidates.size(), 0);
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      if (suppressed[a]) continue;
      const Box& keeper = dets[candidates[a]].box;
      kept.push_back(candidates[a]);
      for (std::size_t b = a + 1; b < candidates.size(); ++b) {
        if (!suppressed[b] && iou(keeper, dets[candidates[b]].box) > options.iou_threshold) {
          suppressed[b] = 1;
        }
      }
    }
  }

  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    return a < b;
  });
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t idx : kept) out.push_back(dets[idx]);
  return out;
}

}  // namespace piou
