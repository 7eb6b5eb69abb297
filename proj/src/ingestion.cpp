// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "piou/errors.hpp"
#include "piou/random.hpp"

namespace piou {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::size_t SceneSet::box_count() const noexcept {
  std::size_t n = 0;
  for (const ImageInfo& img : images) n += img.objects.size();
  return n;
}

std::optional<Box> clip_to_image(const Box& box, int width, int height) {
  const Box clipped{std::max(box.x_min, 0.0), std::max(box.y_min, 0.0),
                    std::min(box.x_max, static_cast<double>(width)),
                    std::min(box.y_max, static_cast<double>(height))};
  if (!clipped.is_valid()) return std::nullopt;
  return clipped;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, fmt::format("short write to '{}'", path.string()));
}

// ---------------------------------------------------------------- COCO

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return fmt::format("line {}, column {}", line, column);
}

const ordered_json& require_array(const ordered_json& root, const char* key) {
  auto it = root.find(key);
  if (it == root.end() || !it->is_array()) {
    throw Error(ErrorCode::kSchema, fmt::format("COCO file has no '{}' array", key));
  }
  return *it;
}

template <typename T>
T field(const ordered_json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kSchema, fmt::format("{} is missing '{}'", where, key));
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, fmt::format("{} field '{}': {}", where, key, e.what()));
  }
}

}  // namespace

SceneSet parse_coco(std::string_view json_text, const CocoOptions& options) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("malformed JSON at {}: {}", line_column(json_text, e.byte), e.what()));
  }
  if (!root.is_object()) throw Error(ErrorCode::kSchema, "COCO root must be an object");

  SceneSet scenes;
  std::unordered_map<std::int64_t, std::size_t> image_pos;
  for (const ordered_json& img : require_array(root, "images")) {
    ImageInfo info;
    info.id = field<std::int64_t>(img, "id", "image");
    info.width = field<int>(img, "width", "image");
    info.height = field<int>(img, "height", "image");
    if (info.width <= 0 || info.height <= 0) {
      throw Error(ErrorCode::kSchema,
                  fmt::format("image {} has non-positive size {}x{}", info.id, info.width,
                              info.height));
    }
    if (auto it = img.find("file_name"); it != img.end() && it->is_string()) {
      info.file_name = it->get<std::string>();
    }
    if (!image_pos.emplace(info.id, scenes.images.size()).second) {
      throw Error(ErrorCode::kConsistency, fmt::format("duplicate image id {}", info.id));
    }
    scenes.images.push_back(std::move(info));
  }

  std::unordered_map<int, bool> known_category;
  for (const ordered_json& cat : require_array(root, "categories")) {
    Category c;
    c.id = field<int>(cat, "id", "category");
    if (auto it = cat.find("name"); it != cat.end() && it->is_string()) {
      c.name = it->get<std::string>();
    }
    known_category[c.id] = true;
    scenes.categories.push_back(std::move(c));
  }

  for (const ordered_json& ann : require_array(root, "annotations")) {
    const auto image_id = field<std::int64_t>(ann, "image_id", "annotation");
    const int category = field<int>(ann, "category_id", "annotation");
    const auto bbox = field<std::vector<double>>(ann, "bbox", "annotation");
    if (bbox.size() != 4) {
      throw Error(ErrorCode::kSchema,
                  fmt::format("annotation bbox has {} values, expected 4", bbox.size()));
    }
    auto pos = image_pos.find(image_id);
    if (pos == image_pos.end()) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("annotation references missing image {}", image_id));
    }
    if (!known_category.contains(category)) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("annotation references missing category {}", category));
    }
    if (auto crowd = ann.find("iscrowd");
        !options.include_crowd && crowd != ann.end() && crowd->is_number() &&
        crowd->get<int>() != 0) {
      ++scenes.dropped.crowd;
      continue;
    }
    const double x = bbox[0];
    const double y = bbox[1];
    const double w = bbox[2];
    const double h = bbox[3];
    if (!(w > 0.0 && h > 0.0)) {
      ++scenes.dropped.zero_area;
      continue;
    }
    ImageInfo& img = scenes.images[pos->second];
    const auto clipped = clip_to_image(Box{x, y, x + w, y + h}, img.width, img.height);
    if (!clipped) {
      ++scenes.dropped.out_of_image;
      continue;
    }
    img.objects.push_back({*clipped, category, image_id});
  }
  return scenes;
}

SceneSet load_coco(const fs::path& path, const CocoOptions& options) {
  const std::string text = read_file(path);
  try {
    return parse_coco(text, options);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

// ---------------------------------------------------------------- VOC

namespace {

namespace pt = boost::property_tree;

double voc_number(const pt::ptree& node, const char* key, const fs::path& file) {
  auto value = node.get_optional<std::string>(key);
  if (!value) {
    throw Error(ErrorCode::kSchema, fmt::format("{}: missing <{}>", file.string(), key));
  }
  try {
    return std::stod(*value);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchema,
                fmt::format("{}: <{}> is not a number: '{}'", file.string(), key, *value));
  }
}

void load_voc_file(const fs::path& file, const VocOptions& options, SceneSet& scenes,
                   std::map<std::string, int>& category_ids) {
  pt::ptree tree;
  try {
    pt::read_xml(file.string(), tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}: malformed XML at line {}: {}", file.string(), e.line(),
                            e.message()));
  }
  auto annotation = tree.get_child_optional("annotation");
  if (!annotation) {
    throw Error(ErrorCode::kSchema, fmt::format("{}: missing <annotation>", file.string()));
  }
  auto size = annotation->get_child_optional("size");
  if (!size) throw Error(ErrorCode::kSchema, fmt::format("{}: missing <size>", file.string()));

  ImageInfo img;
  img.id = static_cast<std::int64_t>(scenes.images.size());
  img.width = static_cast<int>(voc_number(*size, "width", file));
  img.height = static_cast<int>(voc_number(*size, "height", file));
  if (img.width <= 0 || img.height <= 0) {
    throw Error(ErrorCode::kSchema,
                fmt::format("{}: non-positive size {}x{}", file.string(), img.width, img.height));
  }
  img.file_name = annotation->get<std::string>("filename", file.stem().string() + ".jpg");

  for (const auto& [tag, object] : *annotation) {
    if (tag != "object") continue;
    const std::string name = object.get<std::string>("name", "");
    if (name.empty()) {
      throw Error(ErrorCode::kSchema, fmt::format("{}: object without <name>", file.string()));
    }
    auto bndbox = object.get_child_optional("bndbox");
    if (!bndbox) {
      throw Error(ErrorCode::kSchema,
                  fmt::format("{}: object '{}' without <bndbox>", file.string(), name));
    }
    const Box box{voc_number(*bndbox, "xmin", file) - 1.0, voc_number(*bndbox, "ymin", file) - 1.0,
                  voc_number(*bndbox, "xmax", file), voc_number(*bndbox, "ymax", file)};

    auto [it, inserted] = category_ids.try_emplace(name, static_cast<int>(category_ids.size()) + 1);
    if (inserted) scenes.categories.push_back({it->second, name});

    const bool difficult = object.get<std::string>("difficult", "0") == "1";
    if (difficult && !options.include_difficult) {
      ++scenes.dropped.difficult;
      continue;
    }
    if (!(box.width() > 0.0 && box.height() > 0.0)) {
      ++scenes.dropped.zero_area;
      continue;
    }
    const auto clipped = clip_to_image(box, img.width, img.height);
    if (!clipped) {
      ++scenes.dropped.out_of_image;
      continue;
    }
    img.objects.push_back({*clipped, it->second, img.id});
  }
  scenes.images.push_back(std::move(img));
}

}  // namespace

SceneSet load_voc(const fs::path& path, const VocOptions& options) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path, ec)) {
    files.push_back(path);
  } else {
    throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  }

  SceneSet scenes;
  std::map<std::string, int> category_ids;
  for (const fs::path& file : files) load_voc_file(file, options, scenes, category_ids);
  return scenes;
}

// ---------------------------------------------------------------- synthetic

void SynthParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidParameter, msg); };
  if (min_image_size < 1 || max_image_size < min_image_size) {
    fail(fmt::format("image size range [{}, {}] is empty", min_image_size, max_image_size));
  }
  if (min_objects < 0 || max_objects < min_objects) {
    fail(fmt::format("object count range [{}, {}] is empty", min_objects, max_objects));
  }
  if (!(min_box_fraction > 0.0 && min_box_fraction <= max_box_fraction &&
        max_box_fraction <= 1.0)) {
    fail(fmt::format("box fraction range [{}, {}] must lie in (0, 1]", min_box_fraction,
                     max_box_fraction));
  }
  if (!(max_aspect_ratio >= 1.0) || !std::isfinite(max_aspect_ratio)) {
    fail(fmt::format("max aspect ratio {} must be >= 1", max_aspect_ratio));
  }
  if (category_count < 1) fail("category count must be >= 1");
}

SceneSet synth_scenes(std::uint64_t seed, int count, const SynthParams& params) {
  params.validate();
  if (count < 0) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("scene count {} is negative", count));
  }
  SceneSet scenes;
  for (int c = 1; c <= params.category_count; ++c) {
    scenes.categories.push_back({c, fmt::format("class_{}", c)});
  }
  Rng rng(seed);
  for (int n = 0; n < count; ++n) {
    ImageInfo img;
    img.id = n;
    img.width = rng.uniform_int(params.min_image_size, params.max_image_size);
    img.height = rng.uniform_int(params.min_image_size, params.max_image_size);
    img.file_name = fmt::format("synth_{:06d}.jpg", n);
    const int objects = rng.uniform_int(params.min_objects, params.max_objects);
    const double short_side = std::min(img.width, img.height);
    for (int k = 0; k < objects; ++k) {
      const double side = short_side * rng.log_uniform(params.min_box_fraction,
                                                       params.max_box_fraction);
      const double aspect = std::sqrt(rng.log_uniform(1.0 / params.max_aspect_ratio,
                                                      params.max_aspect_ratio));
      const double w = std::clamp(std::round(side * aspect), 1.0, double(img.width));
      const double h = std::clamp(std::round(side / aspect), 1.0, double(img.height));
      const double x0 = std::floor(rng.uniform() * (img.width - w + 1.0));
      const double y0 = std::floor(rng.uniform() * (img.height - h + 1.0));
      const int category = rng.uniform_int(1, params.category_count);
      img.objects.push_back({Box{x0, y0, x0 + w, y0 + h}, category, img.id});
    }
    scenes.images.push_back(std::move(img));
  }
  return scenes;
}

// ---------------------------------------------------------------- JSON form

std::string scene_to_json(const SceneSet& scenes) {
  ordered_json root;
  root["schema_version"] = kSceneSchemaVersion;
  ordered_json cats = ordered_json::array();
  for (const Category& c : scenes.categories) cats.push_back({{"id", c.id}, {"name", c.name}});
  root["categories"] = std::move(cats);
  ordered_json images = ordered_json::array();
  for (const ImageInfo& img : scenes.images) {
    ordered_json objects = ordered_json::array();
    for (const GroundTruth& gt : img.objects) {
      objects.push_back({{"category", gt.category},
                         {"box", {gt.box.x_min, gt.box.y_min, gt.box.x_max, gt.box.y_max}}});
    }
    images.push_back({{"id", img.id},
                      {"width", img.width},
                      {"height", img.height},
                      {"file_name", img.file_name},
                      {"objects", std::move(objects)}});
  }
  root["images"] = std::move(images);
  root["dropped"] = {{"zero_area", scenes.dropped.zero_area},
                     {"out_of_image", scenes.dropped.out_of_image},
                     {"crowd", scenes.dropped.crowd},
                     {"difficult", scenes.dropped.difficult}};
  return root.dump(1) + "\n";
}

SceneSet scene_from_json(std::string_view json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("malformed JSON at {}: {}", line_column(json_text, e.byte), e.what()));
  }
  const int version = field<int>(root, "schema_version", "scene set");
  if (version != kSceneSchemaVersion) {
    throw Error(ErrorCode::kSchema, fmt::format("unsupported schema_version {}", version));
  }
  SceneSet scenes;
  try {
    for (const ordered_json& c : root.at("categories")) {
      scenes.categories.push_back({c.at("id").get<int>(), c.at("name").get<std::string>()});
    }
    for (const ordered_json& i : root.at("images")) {
      ImageInfo img;
      img.id = i.at("id").get<std::int64_t>();
      img.width = i.at("width").get<int>();
      img.height = i.at("height").get<int>();
      img.file_name = i.at("file_name").get<std::string>();
      for (const ordered_json& o : i.at("objects")) {
        const auto b = o.at("box").get<std::vector<double>>();
        if (b.size() != 4) throw Error(ErrorCode::kSchema, "object box must have 4 values");
        const Box box{b[0], b[1], b[2], b[3]};
        require_valid(box);
        img.objects.push_back({box, o.at("category").get<int>(), img.id});
      }
      scenes.images.push_back(std::move(img));
    }
    const ordered_json& d = root.at("dropped");
    scenes.dropped = {d.at("zero_area").get<std::size_t>(), d.at("out_of_image").get<std::size_t>(),
                      d.at("crowd").get<std::size_t>(), d.at("difficult").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, fmt::format("scene set: {}", e.what()));
  }
  return scenes;
}

std::uint64_t scene_checksum(const SceneSet& scenes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : scene_to_json(scenes)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace piou
