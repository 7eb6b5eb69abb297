// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

#include "piou/errors.hpp"

namespace piou {

void HeatmapSpec::validate() const {
  require_valid(box);
  if (grid < 16) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("heatmap grid {} must be >= 16", grid));
  }
  if (metric == Metric::kScaledBox && !(scale > 0.0 && scale <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("scale {} outside (0, 1]", scale));
  }
}

HeatmapGrid sample_heatmap(const HeatmapSpec& spec) {
  spec.validate();
  HeatmapGrid out;
  out.grid = spec.grid;
  out.values.reserve(static_cast<std::size_t>(spec.grid) * spec.grid);
  const Box& box = spec.box;
  const double last = spec.grid - 1;
  for (int row = 0; row < spec.grid; ++row) {
    // pin the final node to the far edge instead of accumulating rounding
    const double y = row == spec.grid - 1 ? box.y_max : box.y_min + box.height() * (row / last);
    for (int col = 0; col < spec.grid; ++col) {
      const double x = col == spec.grid - 1 ? box.x_max : box.x_min + box.width() * (col / last);
      const Point p{x, y};
      double v = 0.0;
      switch (spec.metric) {
        case Metric::kPseudoIou: v = pseudo_iou(p, box); break;
        case Metric::kCenterness: v = centerness(p, box); break;
        case Metric::kScaledBox: v = in_scaled_box(p, box, spec.scale) ? 1.0 : 0.0; break;
      }
      out.values.push_back(v);
    }
  }
  return out;
}

namespace {

struct Rgb {
  double r, g, b;
};

// Viridis anchors at 0, 0.25, 0.5, 0.75, 1.
constexpr std::array<Rgb, 5> kPalette{{{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}}};

std::string colour(double v) {
  const double t = std::clamp(v, 0.0, 1.0) * (kPalette.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t), kPalette.size() - 2);
  const double f = t - k;
  const Rgb& a = kPalette[k];
  const Rgb& b = kPalette[k + 1];
  auto mix = [f](double x, double y) { return static_cast<int>(std::lround(x + f * (y - x))); };
  return fmt::format("#{:02x}{:02x}{:02x}", mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b));
}

}  // namespace

std::string render_heatmap_svg(const HeatmapSpec& spec) {
  const HeatmapGrid grid = sample_heatmap(spec);
  const double aspect = std::clamp(spec.box.height() / spec.box.width(), 0.25, 4.0);
  const double map_w = 480.0;
  const double map_h = map_w * aspect;
  const double cell_w = map_w / grid.grid;
  const double cell_h = map_h / grid.grid;
  const double margin = 20.0;
  const double legend_x = margin + map_w + 30.0;
  const double total_w = legend_x + 80.0;
  const double total_h = std::max(map_h, 240.0) + 2 * margin + 20.0;

  std::string svg;
  auto out = std::back_inserter(svg);
  fmt::format_to(out,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
                 "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
                 total_w, total_h, total_w, total_h);
  fmt::format_to(out, "<desc>metric={} box=({}, {}, {}, {}) grid={}", metric_name(spec.metric),
                 spec.box.x_min, spec.box.y_min, spec.box.x_max, spec.box.y_max, grid.grid);
  if (spec.metric == Metric::kScaledBox) fmt::format_to(out, " scale={}", spec.scale);
  fmt::format_to(out, "</desc>\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
  fmt::format_to(out, "<g id=\"cells\" shape-rendering=\"crispEdges\">\n");
  for (int row = 0; row < grid.grid; ++row) {
    for (int col = 0; col < grid.grid; ++col) {
      const double v = grid.at(row, col);
      fmt::format_to(out,
                     "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" "
                     "fill=\"{}\" data-row=\"{}\" data-col=\"{}\" data-v=\"{:.6f}\"/>\n",
                     margin + col * cell_w, margin + row * cell_h, cell_w, cell_h, colour(v), row,
                     col, v);
    }
  }
  fmt::format_to(out, "</g>\n");
  fmt::format_to(out, "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" "
                      "fill=\"none\" stroke=\"#000000\"/>\n",
                 margin, margin, map_w, map_h);

  // Legend: 1 at the top, 0 at the bottom.
  constexpr int kSteps = 32;
  const double bar_h = 200.0;
  fmt::format_to(out, "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n");
  fmt::format_to(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", legend_x, margin - 6.0,
                 metric_name(spec.metric));
  for (int s = 0; s < kSteps; ++s) {
    const double v = 1.0 - (s + 0.5) / kSteps;
    fmt::format_to(out,
                   "<rect x=\"{:.1f}\" y=\"{:.3f}\" width=\"20\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                   legend_x, margin + s * bar_h / kSteps, bar_h / kSteps, colour(v));
  }
  for (double tick : {1.0, 0.5, 0.0}) {
    fmt::format_to(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{:.1f}</text>\n", legend_x + 26.0,
                   margin + (1.0 - tick) * bar_h + 4.0, tick);
  }
  fmt::format_to(out, "</g>\n</svg>\n");
  return svg;
}

}  // namespace piou
