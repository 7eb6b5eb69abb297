// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/report.hpp"

#include <charconv>
#include <cmath>
#include <iterator>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "piou/errors.hpp"

namespace piou {

using nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

ordered_json stats_json(const AssignmentStats& s) {
  return {{"total_points", s.total_points},
          {"positive", s.positive},
          {"negative", s.negative},
          {"n_pos", s.n_pos},
          {"ground_truths", s.per_gt_positive.size()},
          {"dropped_ground_truths", s.dropped_gt},
          {"zero_positive_ground_truths", s.zero_positive_gt},
          {"zero_positive_fraction", s.zero_positive_fraction()},
          {"per_gt_positive", s.per_gt_positive}};
}

ordered_json run_json(const RunDescription& run) {
  ordered_json j = {{"metric", metric_name(run.metric)}};
  j[run.metric == Metric::kScaledBox ? "scale" : "threshold"] = run.parameter;
  j["strides"] = run.strides;
  j["source"] = run.source;
  return j;
}

}  // namespace

std::string stats_to_json(const RunDescription& run, std::span<const ImageAssignment> images) {
  ordered_json root;
  root["schema_version"] = kStatsSchemaVersion;
  root["run"] = run_json(run);
  AssignmentStats total;
  ordered_json per_image = ordered_json::array();
  for (const ImageAssignment& img : images) {
    ordered_json entry = {{"image_id", img.image_id}, {"width", img.width}, {"height", img.height}};
    entry["stats"] = stats_json(img.stats);
    per_image.push_back(std::move(entry));
    total += img.stats;
  }
  root["images_processed"] = images.size();
  root["aggregate"] = stats_json(total);
  root["images"] = std::move(per_image);
  return root.dump(2) + "\n";
}

std::string labels_to_csv(std::span<const ImageAssignment> images) {
  std::string csv = "image_id,level,i,j,x,y,label,gt_index,v\n";
  auto out = std::back_inserter(csv);
  for (const ImageAssignment& img : images) {
    for (const PointLabel& pl : img.assignment.points) {
      fmt::format_to(out, "{},{},{},{},{},{},{},{},{}\n", img.image_id, pl.sample.level_index,
                     pl.sample.grid_i, pl.sample.grid_j, format_double(pl.sample.image_point.x),
                     format_double(pl.sample.image_point.y), pl.positive ? 1 : -1, pl.gt_index,
                     format_double(pl.value));
    }
  }
  return csv;
}

std::string sweep_to_json(const RunDescription& run, std::span<const SweepEntry> entries) {
  ordered_json root;
  root["schema_version"] = kStatsSchemaVersion;
  ordered_json r = run_json(run);
  r.erase("threshold");
  r.erase("scale");
  root["run"] = std::move(r);
  ordered_json list = ordered_json::array();
  for (const SweepEntry& e : entries) {
    ordered_json j = {{"threshold", e.threshold}};
    j["stats"] = stats_json(e.stats);
    list.push_back(std::move(j));
  }
  root["sweep"] = std::move(list);
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------- detections

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse,
                fmt::format("detections line {}: bad {} '{}'", line, name, text));
  }
  return value;
}

Detection checked(Detection d, std::size_t where, const char* unit) {
  if (!d.box.is_valid()) {
    throw Error(ErrorCode::kInvalidBox,
                fmt::format("detections {} {}: box has non-positive width or height", unit, where));
  }
  if (!(d.score >= 0.0 && d.score <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("detections {} {}: score {} outside [0, 1]", unit, where, d.score));
  }
  return d;
}

constexpr std::string_view kDetectionHeader = "image_id,category,score,x_min,y_min,x_max,y_max";

}  // namespace

std::vector<Detection> parse_detections_csv(std::string_view text) {
  std::vector<Detection> dets;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line != kDetectionHeader) {
        throw Error(ErrorCode::kParse,
                    fmt::format("detections line {}: expected header '{}'", line_no,
                                kDetectionHeader));
      }
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) {
      throw Error(ErrorCode::kParse,
                  fmt::format("detections line {}: expected 7 fields, got {}", line_no, f.size()));
    }
    Detection d;
    d.image_id = parse_field<std::int64_t>(f[0], line_no, "image_id");
    d.category = parse_field<int>(f[1], line_no, "category");
    d.score = parse_field<double>(f[2], line_no, "score");
    d.box = {parse_field<double>(f[3], line_no, "x_min"), parse_field<double>(f[4], line_no, "y_min"),
             parse_field<double>(f[5], line_no, "x_max"), parse_field<double>(f[6], line_no, "y_max")};
    dets.push_back(checked(d, line_no, "line"));
  }
  return dets;
}

std::string detections_to_csv(std::span<const Detection> dets) {
  std::string csv(kDetectionHeader);
  csv += '\n';
  auto out = std::back_inserter(csv);
  for (const Detection& d : dets) {
    fmt::format_to(out, "{},{},{},{},{},{},{}\n", d.image_id, d.category, format_double(d.score),
                   format_double(d.box.x_min), format_double(d.box.y_min),
                   format_double(d.box.x_max), format_double(d.box.y_max));
  }
  return csv;
}

std::vector<Detection> parse_detections_json(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, fmt::format("detections JSON at byte {}: {}", e.byte, e.what()));
  }
  if (!root.is_array()) throw Error(ErrorCode::kSchema, "detections JSON must be an array");
  std::vector<Detection> dets;
  for (std::size_t k = 0; k < root.size(); ++k) {
    const ordered_json& rec = root[k];
    try {
      const auto bbox = rec.at("bbox").get<std::vector<double>>();
      if (bbox.size() != 4) throw Error(ErrorCode::kSchema, "bbox must have 4 values");
      Detection d;
      d.image_id = rec.at("image_id").get<std::int64_t>();
      d.category = rec.at("category_id").get<int>();
      d.score = rec.at("score").get<double>();
      d.box = {bbox[0], bbox[1], bbox[0] + bbox[2], bbox[1] + bbox[3]};
      dets.push_back(checked(d, k, "record"));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchema, fmt::format("detections record {}: {}", k, e.what()));
    }
  }
  return dets;
}

std::string detections_to_json(std::span<const Detection> dets) {
  ordered_json root = ordered_json::array();
  for (const Detection& d : dets) {
    root.push_back({{"image_id", d.image_id},
                    {"category_id", d.category},
                    {"bbox", {d.box.x_min, d.box.y_min, d.box.width(), d.box.height()}},
                    {"score", d.score}});
  }
  return root.dump(1) + "\n";
}

}  // namespace piou
