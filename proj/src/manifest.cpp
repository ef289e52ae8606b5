// Copyright 2026 The dcp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcp/manifest.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "dcp/formats.hpp"

namespace dcp {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_manifest(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::kInvalidManifest, fmt::format("{}: {}", where, why));
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string() || obj.at(key).get<std::string>().empty()) {
    bad_manifest(where, fmt::format("missing or empty string field \"{}\"", key));
  }
  return obj.at(key).get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  return fs::relative(p, base).generic_string();
}

Rect rect_from_json(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) bad_manifest(where, "box must be an array [x, y, w, h]");
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad_manifest(where, "box components must be integers");
  }
  return Rect{v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>()};
}

nlohmann::json root_array(const fs::path& path) {
  nlohmann::json doc = read_json(path);
  if (!doc.is_array()) bad_manifest(path.string(), "expected a JSON array of records");
  return doc;
}

}  // namespace

nlohmann::json read_json(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    bad_manifest(path.string(), e.what());
  }
}

void write_json(const nlohmann::json& doc, const fs::path& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<BackgroundRecord> load_background_manifest(const fs::path& path) {
  const nlohmann::json doc = root_array(path);
  const fs::path base = path.parent_path();
  std::vector<BackgroundRecord> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = fmt::format("{}[{}]", path.string(), i);
    const auto& item = doc[i];
    if (!item.is_object()) bad_manifest(where, "record must be an object");
    BackgroundRecord r;
    r.id = require_string(item, "id", where);
    r.embedding = resolve(base, require_string(item, "embedding", where));
    r.image = resolve(base, require_string(item, "image", where));
    r.depth = resolve(base, require_string(item, "depth", where));
    if (item.contains("dim")) {
      if (!item["dim"].is_number_unsigned()) bad_manifest(where, "dim must be a positive integer");
      r.dim = item["dim"].get<std::size_t>();
    }
    if (!ids.insert(r.id).second) bad_manifest(where, fmt::format("duplicate id \"{}\"", r.id));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ForegroundRecord> load_foreground_manifest(const fs::path& path) {
  const nlohmann::json doc = root_array(path);
  const fs::path base = path.parent_path();
  std::vector<ForegroundRecord> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = fmt::format("{}[{}]", path.string(), i);
    const auto& item = doc[i];
    if (!item.is_object()) bad_manifest(where, "record must be an object");
    ForegroundRecord r;
    r.id = require_string(item, "id", where);
    r.image = resolve(base, require_string(item, "image", where));
    r.mask = resolve(base, require_string(item, "mask", where));
    r.depth = resolve(base, require_string(item, "depth", where));
    r.visual_embedding = resolve(base, require_string(item, "visual_embedding", where));
    r.text_embedding = resolve(base, require_string(item, "text_embedding", where));
    if (!item.contains("face_box")) bad_manifest(where, "missing \"face_box\"");
    r.face_box = rect_from_json(item["face_box"], where);
    if (!ids.insert(r.id).second) bad_manifest(where, fmt::format("duplicate id \"{}\"", r.id));
    out.push_back(std::move(r));
  }
  return out;
}

void save_background_manifest(const std::vector<BackgroundRecord>& records, const fs::path& path) {
  const fs::path base = path.parent_path();
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json item{{"id", r.id},
                        {"embedding", relative_to(r.embedding, base)},
                        {"image", relative_to(r.image, base)},
                        {"depth", relative_to(r.depth, base)}};
    if (r.dim) item["dim"] = *r.dim;
    doc.push_back(std::move(item));
  }
  write_json(doc, path);
}

void save_foreground_manifest(const std::vector<ForegroundRecord>& records, const fs::path& path) {
  const fs::path base = path.parent_path();
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    doc.push_back({{"id", r.id},
                   {"image", relative_to(r.image, base)},
                   {"mask", relative_to(r.mask, base)},
                   {"depth", relative_to(r.depth, base)},
                   {"visual_embedding", relative_to(r.visual_embedding, base)},
                   {"text_embedding", relative_to(r.text_embedding, base)},
                   {"face_box", {r.face_box.x, r.face_box.y, r.face_box.w, r.face_box.h}}});
  }
  write_json(doc, path);
}

std::string to_string(Origin origin) { return origin == Origin::kReal ? "real" : "synthetic"; }

nlohmann::json to_json(const Annotation& a) {
  return nlohmann::json{{"label", a.label},
                        {"box", {a.box.x, a.box.y, a.box.w, a.box.h}},
                        {"source_foreground_id", a.source_foreground_id},
                        {"visible_fraction", a.visible_fraction},
                        {"difficult", a.difficult}};
}

Annotation annotation_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) bad_manifest("annotation", "must be an object");
  Annotation a;
  if (doc.contains("label")) a.label = require_string(doc, "label", "annotation");
  if (!doc.contains("box")) bad_manifest("annotation", "missing \"box\"");
  a.box = rect_from_json(doc["box"], "annotation");
  if (doc.contains("source_foreground_id")) {
    a.source_foreground_id = doc["source_foreground_id"].get<std::string>();
  }
  if (doc.contains("visible_fraction")) a.visible_fraction = doc["visible_fraction"].get<double>();
  if (doc.contains("difficult")) a.difficult = doc["difficult"].get<bool>();
  return a;
}

nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json anns = nlohmann::json::array();
    for (const auto& a : e.annotations) anns.push_back(to_json(a));
    nlohmann::json item{{"image", e.image}, {"annotations", anns}, {"origin", to_string(e.origin)}};
    if (e.provenance) item["provenance"] = *e.provenance;
    entries.push_back(std::move(item));
  }
  nlohmann::json log = nlohmann::json::array();
  for (const auto& line : m.log) log.push_back(line);
  return nlohmann::json{{"mix_ratio", m.mix_ratio}, {"entries", entries}, {"log", log}};
}

DatasetManifest dataset_manifest_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    bad_manifest("dataset manifest", "expected an object with an \"entries\" array");
  }
  DatasetManifest m;
  try {
    if (doc.contains("mix_ratio")) m.mix_ratio = doc["mix_ratio"].get<double>();
    for (const auto& item : doc["entries"]) {
      DatasetEntry e;
      e.image = require_string(item, "image", "dataset entry");
      if (item.contains("annotations")) {
        for (const auto& a : item["annotations"]) e.annotations.push_back(annotation_from_json(a));
      }
      const std::string origin = item.value("origin", std::string("real"));
      if (origin == "real") {
        e.origin = Origin::kReal;
      } else if (origin == "synthetic") {
        e.origin = Origin::kSynthetic;
      } else {
        bad_manifest("dataset entry", fmt::format("unknown origin \"{}\"", origin));
      }
      if (item.contains("provenance")) e.provenance = item["provenance"];
      m.entries.push_back(std::move(e));
    }
    if (doc.contains("log")) {
      for (const auto& line : doc["log"]) m.log.push_back(line);
    }
  } catch (const nlohmann::json::exception& e) {
    bad_manifest("dataset manifest", e.what());
  }
  return m;
}

DatasetManifest load_dataset_manifest(const fs::path& path) {
  try {
    return dataset_manifest_from_json(read_json(path));
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

void save_dataset_manifest(const DatasetManifest& manifest, const fs::path& path) {
  write_json(to_json(manifest), path);
}

std::size_t synthetic_count_for(double ratio, std::size_t real_count) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("mix ratio {} outside [0, 1); a training set needs real data", ratio));
  }
  return static_cast<std::size_t>(std::llround(ratio / (1.0 - ratio) * static_cast<double>(real_count)));
}

DatasetManifest mix_manifest(const DatasetManifest& real, const DatasetManifest& synthetic,
                             double ratio, std::uint64_t seed) {
  const std::size_t need = synthetic_count_for(ratio, real.entries.size());
  if (real.entries.empty()) throw Error(ErrorCode::kInvalidArgument, "real manifest is empty");
  if (need > synthetic.entries.size()) {
    throw Error(ErrorCode::kInsufficientSynthetic,
                fmt::format("ratio {} over {} real entries needs {} synthetic entries, pool has {}",
                            ratio, real.entries.size(), need, synthetic.entries.size()));
  }
  DatasetManifest out;
  out.mix_ratio = ratio;
  out.entries = real.entries;
  for (auto& e : out.entries) e.origin = Origin::kReal;

  std::vector<std::size_t> order(synthetic.entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitRng rng(seed);
  // Partial Fisher-Yates: the first `need` slots are a uniform sample.
  for (std::size_t i = 0; i < need; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < need; ++i) {
    DatasetEntry e = synthetic.entries[order[i]];
    e.origin = Origin::kSynthetic;
    out.entries.push_back(std::move(e));
  }
  return out;
}

nlohmann::json coco_document(const std::vector<CocoImage>& images) {
  nlohmann::json imgs = nlohmann::json::array();
  nlohmann::json anns = nlohmann::json::array();
  long long ann_id = 1;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& img = images[i];
    const auto image_id = static_cast<long long>(i + 1);
    imgs.push_back({{"id", image_id},
                    {"file_name", img.file_name},
                    {"width", img.width},
                    {"height", img.height}});
    for (const auto& a : img.annotations) {
      anns.push_back({{"id", ann_id++},
                      {"image_id", image_id},
                      {"category_id", 1},
                      // COCO order: column, row, width, height.
                      {"bbox", {a.box.y, a.box.x, a.box.w, a.box.h}},
                      {"area", a.box.area()},
                      {"iscrowd", 0},
                      {"difficult", a.difficult},
                      {"visible_fraction", a.visible_fraction},
                      {"source_foreground_id", a.source_foreground_id}});
    }
  }
  return nlohmann::json{{"images", imgs},
                        {"annotations", anns},
                        {"categories", {{{"id", 1}, {"name", "face"}}}}};
}

std::uint64_t SplitRng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "SplitRng::below(0)");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double SplitRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace dcp
