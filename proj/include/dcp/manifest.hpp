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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcp/compositor.hpp"

namespace dcp {

// Background pool entry; paths are resolved against the manifest directory.
struct BackgroundRecord {
  std::string id;
  std::filesystem::path embedding;
  std::filesystem::path image;
  std::filesystem::path depth;
  std::optional<std::size_t> dim;
};

struct ForegroundRecord {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path mask;
  std::filesystem::path depth;
  std::filesystem::path visual_embedding;
  std::filesystem::path text_embedding;
  Rect face_box;
};

// Both loaders reject malformed JSON, missing fields and duplicate ids with
// kInvalidManifest. They do not touch the referenced files.
std::vector<BackgroundRecord> load_background_manifest(const std::filesystem::path& path);
std::vector<ForegroundRecord> load_foreground_manifest(const std::filesystem::path& path);

// Writes records with paths relative to the manifest's directory.
void save_background_manifest(const std::vector<BackgroundRecord>& records,
                              const std::filesystem::path& path);
void save_foreground_manifest(const std::vector<ForegroundRecord>& records,
                              const std::filesystem::path& path);

enum class Origin { kReal, kSynthetic };

struct DatasetEntry {
  std::string image;
  std::vector<Annotation> annotations;
  Origin origin = Origin::kReal;
  std::optional<nlohmann::json> provenance;

  bool operator==(const DatasetEntry&) const = default;
};

struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  double mix_ratio = 0.0;  // synthetic fraction
  std::vector<nlohmann::json> log;

  bool operator==(const DatasetManifest&) const = default;
};

nlohmann::json to_json(const Annotation& a);
Annotation annotation_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest dataset_manifest_from_json(const nlohmann::json& doc);
DatasetManifest load_dataset_manifest(const std::filesystem::path& path);
void save_dataset_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Number of synthetic entries that makes them a `ratio` fraction of the
// final set: round(ratio / (1 - ratio) * real_count).
std::size_t synthetic_count_for(double ratio, std::size_t real_count);

// Keeps every real entry in order and appends synthetic_count_for() entries
// drawn without replacement by a seeded shuffle. Rejects ratio outside
// [0, 1), an empty real set and an insufficient synthetic pool.
DatasetManifest mix_manifest(const DatasetManifest& real, const DatasetManifest& synthetic,
                             double ratio, std::uint64_t seed);

struct CocoImage {
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<Annotation> annotations;
};

// COCO detection document with the single category "face".
nlohmann::json coco_document(const std::vector<CocoImage>& images);

// Deterministic across standard libraries, unlike std::uniform_int_distribution.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

std::string to_string(Origin origin);

// Writes `doc` with two-space indentation and a trailing newline, creating
// the parent directory if needed.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace dcp
