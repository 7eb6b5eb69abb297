// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "piou/errors.hpp"
#include "piou/heatmap.hpp"
#include "piou/ingestion.hpp"
#include "piou/oracle.hpp"
#include "piou/postprocess.hpp"
#include "piou/pyramid.hpp"
#include "piou/report.hpp"

namespace piou::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("piou");
    l->set_pattern("piou: %l: %v");
    const char* env = std::getenv("PIOU_LOG_LEVEL");
    auto level = spdlog::level::warn;
    if (env != nullptr) {
      level = spdlog::level::from_str(env);
      // from_str maps unknown names to off
      if (level == spdlog::level::off && std::string_view(env) != "off") {
        level = spdlog::level::warn;
      }
    }
    l->set_level(level);
    return l;
  }();
  return log;
}

AssignmentRule make_rule(const RunConfig& cfg) {
  const Metric metric = parse_metric(cfg.metric);
  AssignmentRule rule{metric, metric == Metric::kScaledBox ? cfg.scale : cfg.threshold};
  rule.validate();
  return rule;
}

RunDescription describe(const RunConfig& cfg, Metric metric, double parameter) {
  RunDescription run;
  run.metric = metric;
  run.parameter = parameter;
  run.strides = cfg.strides;
  run.source = cfg.format == "synth" ? fmt::format("synth(seed={}, scenes={})", cfg.seed, cfg.scenes)
                                     : fmt::format("{}:{}", cfg.format, cfg.annotations);
  return run;
}

void require_strides(const RunConfig& cfg) {
  // Validates the stride list once, independent of any image.
  (void)PyramidConfig::from_strides(cfg.strides, 1, 1);
}

fs::path output_path(const RunConfig& cfg, const char* name) { return fs::path(cfg.out) / name; }

void report_drops(const SceneSet& scenes) {
  const DropCounts& d = scenes.dropped;
  if (d.total() > 0) {
    logger()->warn("dropped {} annotations (zero-area {}, out-of-image {}, crowd {}, difficult {})",
                   d.total(), d.zero_area, d.out_of_image, d.crowd, d.difficult);
  }
}

}  // namespace

SceneSet apply_image_size(SceneSet scenes, const std::string& policy) {
  if (policy == "native") return scenes;
  int fixed_w = 0;
  int fixed_h = 0;
  int short_side = 0;
  int long_side = 0;
  auto parse_pair = [&](char sep, int& a, int& b) {
    const auto pos = policy.find(sep);
    if (pos == std::string::npos) return false;
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      a = std::stoi(policy.substr(0, pos), &used_a);
      b = std::stoi(policy.substr(pos + 1), &used_b);
      return used_a == pos && used_b == policy.size() - pos - 1 && a > 0 && b > 0;
    } catch (const std::exception&) {
      return false;
    }
  };
  const bool fixed = parse_pair('x', fixed_w, fixed_h);
  const bool bounded = !fixed && parse_pair(':', short_side, long_side);
  if (!fixed && !bounded) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("image size policy '{}' is not native, WxH or SHORT:LONG", policy));
  }
  for (ImageInfo& img : scenes.images) {
    int new_w = fixed_w;
    int new_h = fixed_h;
    if (bounded) {
      const double s = std::min(static_cast<double>(short_side) / std::min(img.width, img.height),
                                static_cast<double>(long_side) / std::max(img.width, img.height));
      new_w = std::max(1, static_cast<int>(std::lround(img.width * s)));
      new_h = std::max(1, static_cast<int>(std::lround(img.height * s)));
    }
    const double sx = static_cast<double>(new_w) / img.width;
    const double sy = static_cast<double>(new_h) / img.height;
    for (GroundTruth& gt : img.objects) {
      gt.box = {gt.box.x_min * sx, gt.box.y_min * sy, gt.box.x_max * sx, gt.box.y_max * sy};
    }
    img.width = new_w;
    img.height = new_h;
  }
  return scenes;
}

SceneSet load_scenes(const RunConfig& cfg) {
  SceneSet scenes;
  if (cfg.format == "coco") {
    scenes = load_coco(cfg.annotations);
  } else if (cfg.format == "voc") {
    scenes = load_voc(cfg.annotations);
  } else if (cfg.format == "synth") {
    scenes = synth_scenes(cfg.seed, cfg.scenes);
  } else {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("unknown annotation format '{}'", cfg.format));
  }
  report_drops(scenes);
  logger()->info("loaded {} images with {} boxes", scenes.images.size(), scenes.box_count());
  return apply_image_size(std::move(scenes), cfg.image_size);
}

int cmd_assign(const RunConfig& cfg) {
  const AssignmentRule rule = make_rule(cfg);
  require_strides(cfg);
  const SceneSet scenes = load_scenes(cfg);

  std::vector<ImageAssignment> results;
  results.reserve(scenes.images.size());
  for (const ImageInfo& img : scenes.images) {
    const PyramidConfig pyramid = PyramidConfig::from_strides(cfg.strides, img.width, img.height);
    const std::vector<PointSample> points = generate_points(pyramid);
    ImageAssignment out{img.id, img.width, img.height, assign(points, img.objects, rule, pyramid), {}};
    out.stats = compute_stats(out.assignment, img.objects);
    if (out.stats.dropped_gt > 0) {
      logger()->warn("image {}: {} ground truths outside the image were dropped", img.id,
                     out.stats.dropped_gt);
    }
    results.push_back(std::move(out));
  }

  write_file(output_path(cfg, "stats.json"),
             stats_to_json(describe(cfg, rule.metric, rule.parameter), results));
  write_file(output_path(cfg, "labels.csv"), labels_to_csv(results));

  std::size_t positives = 0;
  std::size_t points = 0;
  for (const ImageAssignment& r : results) {
    positives += r.stats.positive;
    points += r.stats.total_points;
  }
  fmt::print("assign: {} images, {} points, {} positive -> {}\n", results.size(), points,
             positives, cfg.out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const Metric metric = parse_metric(cfg.metric);
  if (cfg.thresholds.empty()) throw Error(ErrorCode::kInvalidParameter, "threshold list is empty");
  if (!std::is_sorted(cfg.thresholds.begin(), cfg.thresholds.end())) {
    throw Error(ErrorCode::kInvalidParameter, "thresholds must be sorted ascending");
  }
  for (double t : cfg.thresholds) AssignmentRule{metric, t}.validate();
  require_strides(cfg);
  const SceneSet scenes = load_scenes(cfg);

  std::vector<SweepEntry> entries;
  for (double t : cfg.thresholds) entries.push_back({t, {}});
  for (const ImageInfo& img : scenes.images) {
    const PyramidConfig pyramid = PyramidConfig::from_strides(cfg.strides, img.width, img.height);
    const std::vector<PointSample> points = generate_points(pyramid);
    const auto per_threshold = sweep_thresholds(points, img.objects, metric, cfg.thresholds, pyramid);
    for (std::size_t k = 0; k < entries.size(); ++k) entries[k].stats += per_threshold[k];
  }

  write_file(output_path(cfg, "sweep.json"), sweep_to_json(describe(cfg, metric, 0.0), entries));
  for (const SweepEntry& e : entries) {
    fmt::print("sweep: T={} positive={} zero_positive_fraction={:.4f}\n", format_double(e.threshold),
               e.stats.positive, e.stats.zero_positive_fraction());
  }
  return 0;
}

int cmd_heatmap(const RunConfig& cfg) {
  if (cfg.box.size() != 4) {
    throw Error(ErrorCode::kInvalidParameter, "--box needs x_min,y_min,x_max,y_max");
  }
  HeatmapSpec spec;
  spec.box = Box::from_corners(cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]);
  spec.metric = parse_metric(cfg.metric);
  spec.scale = cfg.scale;
  spec.grid = cfg.grid;
  const fs::path path = output_path(cfg, "heatmap.svg");
  write_file(path, render_heatmap_svg(spec));
  fmt::print("heatmap: {} {}x{} -> {}\n", cfg.metric, cfg.grid, cfg.grid, path.string());
  return 0;
}

int cmd_oracle_check(const RunConfig& cfg) {
  const oracle::CheckReport report = oracle::run_check(cfg.cases, cfg.resolution, cfg.seed);
  nlohmann::ordered_json j = {{"cases", report.cases},
                              {"resolution", report.resolution},
                              {"seed", report.seed},
                              {"tolerance", report.tolerance},
                              {"max_deviation", report.max_deviation},
                              {"worst_point", {report.worst_point.x, report.worst_point.y}},
                              {"worst_box",
                               {report.worst_box.x_min, report.worst_box.y_min,
                                report.worst_box.x_max, report.worst_box.y_max}},
                              {"passed", report.passed}};
  write_file(output_path(cfg, "oracle.json"), j.dump(2) + "\n");
  fmt::print("oracle-check: {} cases at {}x{}: max deviation {:.3e} (tolerance {:.3e}) {}\n",
             report.cases, report.resolution, report.resolution, report.max_deviation,
             report.tolerance, report.passed ? "PASS" : "FAIL");
  return report.passed ? 0 : 1;
}

int cmd_postprocess(const RunConfig& cfg) {
  for (auto [value, name] : {std::pair{cfg.score_threshold, "score threshold"},
                             std::pair{cfg.nms_threshold, "nms threshold"}}) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter, fmt::format("{} {} outside [0, 1]", name, value));
    }
  }
  if (cfg.detections.empty()) throw Error(ErrorCode::kInvalidParameter, "--detections is required");
  const bool json = fs::path(cfg.detections).extension() == ".json";
  const std::string text = read_file(cfg.detections);
  std::vector<Detection> dets;
  try {
    dets = json ? parse_detections_json(text) : parse_detections_csv(text);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", cfg.detections, e.what()));
  }
  const std::vector<Detection> kept = score_filter(dets, cfg.score_threshold);
  const std::vector<Detection> final_dets = nms(kept, {cfg.nms_threshold, cfg.pre_nms_top_k});
  const fs::path path = output_path(cfg, json ? "detections.json" : "detections.csv");
  write_file(path, json ? detections_to_json(final_dets) : detections_to_csv(final_dets));
  fmt::print("postprocess: {} in, {} after score filter, {} after nms -> {}\n", dets.size(),
             kept.size(), final_dets.size(), path.string());
  return 0;
}

// ---------------------------------------------------------------- entry point

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
    case ErrorCode::kIo:
    case ErrorCode::kConsistency:
      return 3;
    default:
      return 2;
  }
}

// Fills options not given on the command line from a JSON config file.
void apply_config_file(const std::string& path, const std::map<std::string, CLI::Option*>& options,
                       RunConfig& cfg) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, fmt::format("{}: byte {}: {}", path, e.byte, e.what()));
  }
  if (!root.is_object()) throw Error(ErrorCode::kSchema, fmt::format("{}: expected an object", path));

  using Setter = std::function<void(const nlohmann::json&)>;
  const std::map<std::string, Setter> setters{
      {"annotations", [&](const auto& v) { cfg.annotations = v.template get<std::string>(); }},
      {"format", [&](const auto& v) { cfg.format = v.template get<std::string>(); }},
      {"metric", [&](const auto& v) { cfg.metric = v.template get<std::string>(); }},
      {"threshold", [&](const auto& v) { cfg.threshold = v.template get<double>(); }},
      {"scale", [&](const auto& v) { cfg.scale = v.template get<double>(); }},
      {"strides", [&](const auto& v) { cfg.strides = v.template get<std::vector<int>>(); }},
      {"image-size", [&](const auto& v) { cfg.image_size = v.template get<std::string>(); }},
      {"thresholds", [&](const auto& v) { cfg.thresholds = v.template get<std::vector<double>>(); }},
      {"grid", [&](const auto& v) { cfg.grid = v.template get<int>(); }},
      {"cases", [&](const auto& v) { cfg.cases = v.template get<int>(); }},
      {"resolution", [&](const auto& v) { cfg.resolution = v.template get<int>(); }},
      {"seed", [&](const auto& v) { cfg.seed = v.template get<std::uint64_t>(); }},
      {"scenes", [&](const auto& v) { cfg.scenes = v.template get<int>(); }},
      {"out", [&](const auto& v) { cfg.out = v.template get<std::string>(); }},
      {"box", [&](const auto& v) { cfg.box = v.template get<std::vector<double>>(); }},
      {"detections", [&](const auto& v) { cfg.detections = v.template get<std::string>(); }},
      {"score-threshold", [&](const auto& v) { cfg.score_threshold = v.template get<double>(); }},
      {"nms-threshold", [&](const auto& v) { cfg.nms_threshold = v.template get<double>(); }},
      {"pre-nms-top-k", [&](const auto& v) { cfg.pre_nms_top_k = v.template get<std::size_t>(); }},
  };
  for (const auto& [key, value] : root.items()) {
    auto setter = setters.find(key);
    if (setter == setters.end()) {
      throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: unknown key '{}'", path, key));
    }
    auto opt = options.find(key);
    if (opt != options.end() && opt->second->count() > 0) continue;
    try {
      setter->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: key '{}': {}", path, key, e.what()));
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Label-assignment toolkit for anchor-free detection (Pseudo-IoU, centerness, "
               "scaled-box)",
               "piou"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::size_t top_k = 0;
  std::map<std::string, CLI::Option*> opts;
  opts["annotations"] = app.add_option("--annotations", cfg.annotations,
                                       "COCO JSON file, or VOC XML file/directory");
  opts["format"] = app.add_option("--format", cfg.format, "coco | voc | synth")
                       ->check(CLI::IsMember({"coco", "voc", "synth"}));
  opts["metric"] = app.add_option("--metric", cfg.metric, "pseudo-iou | centerness | scaled-box");
  opts["threshold"] = app.add_option("--threshold", cfg.threshold, "assignment threshold T");
  opts["scale"] = app.add_option("--scale", cfg.scale, "scaled-box shrink factor s");
  opts["strides"] = app.add_option("--strides", cfg.strides, "pyramid strides")->delimiter(',');
  opts["image-size"] =
      app.add_option("--image-size", cfg.image_size, "native | WxH | SHORT:LONG");
  opts["thresholds"] =
      app.add_option("--thresholds", cfg.thresholds, "ascending sweep thresholds")->delimiter(',');
  opts["grid"] = app.add_option("--grid", cfg.grid, "heatmap grid resolution (>= 16)");
  opts["cases"] = app.add_option("--cases", cfg.cases, "oracle-check case count");
  opts["resolution"] = app.add_option("--resolution", cfg.resolution, "oracle raster resolution");
  opts["seed"] = app.add_option("--seed", cfg.seed, "random seed");
  opts["scenes"] = app.add_option("--scenes", cfg.scenes, "synthetic scene count");
  opts["out"] = app.add_option("--out", cfg.out, "output directory");
  opts["box"] = app.add_option("--box", cfg.box, "heatmap box x_min,y_min,x_max,y_max")
                    ->delimiter(',');
  opts["detections"] = app.add_option("--detections", cfg.detections, "detections CSV or JSON");
  opts["score-threshold"] = app.add_option("--score-threshold", cfg.score_threshold);
  opts["nms-threshold"] = app.add_option("--nms-threshold", cfg.nms_threshold);
  opts["pre-nms-top-k"] = app.add_option("--pre-nms-top-k", top_k, "cap candidates per class");
  app.add_option("--config", config_path, "JSON config file; flags take precedence");

  std::map<std::string, std::function<int(const RunConfig&)>> commands{
      {"assign", cmd_assign},       {"sweep", cmd_sweep},
      {"heatmap", cmd_heatmap},     {"oracle-check", cmd_oracle_check},
      {"postprocess", cmd_postprocess}};
  const std::map<std::string, std::string> help{
      {"assign", "label pyramid points and write stats.json + labels.csv"},
      {"sweep", "assignment statistics over a threshold list (sweep.json)"},
      {"heatmap", "SVG heatmap of a metric over one box (heatmap.svg)"},
      {"oracle-check", "compare Pseudo-IoU against a rasterised IoU oracle"},
      {"postprocess", "score filter + class-wise NMS over detections"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fmt::print(stderr, "piou: error[usage]: {}\n", e.what());
    return 2;
  }

  try {
    if (opts["pre-nms-top-k"]->count() > 0) cfg.pre_nms_top_k = top_k;
    if (!config_path.empty()) apply_config_file(config_path, opts, cfg);
    const std::string name = app.get_subcommands().front()->get_name();
    return commands.at(name)(cfg);
  } catch (const Error& e) {
    fmt::print(stderr, "piou: error[{}]: {}\n", error_tag(e.code()), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "piou: error[internal]: {}\n", e.what());
    return 4;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"piou"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace piou::cli
