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

#include "dcp/extraction.hpp"
#include "dcp/placement.hpp"

namespace dcp {

struct SyntheticSpec {
  std::size_t fg_count = 1;
  std::size_t bg_count = 1;
  int width = 64;   // background extent
  int height = 64;
  // Foreground extent; 0 derives max(8, extent / 4) capped at the background.
  int fg_width = 0;
  int fg_height = 0;
  std::size_t embedding_dim = 16;
  // Embed the first foreground's depth statistics into the first background.
  bool planted_patch = false;
  // Extraction settings the planted statistics are computed with.
  VisibilityParams visibility{};
  bool cleanup = true;
};

struct PlantedTruth {
  std::string foreground_id;
  std::string background_id;
  int x = 0;
  int y = 0;
  WindowSize window;
  ForegroundDepthStats fg_stats;
};

struct SyntheticAssets {
  std::filesystem::path foreground_manifest;
  std::filesystem::path background_manifest;
  std::optional<std::filesystem::path> ground_truth;
  std::optional<PlantedTruth> planted;
};

// Writes a deterministic asset tree under `out_dir`: fg/ and bg/ assets,
// foregrounds.json, backgrounds.json and, with planted_patch,
// ground_truth.json. Identical (seed, spec) pairs produce identical bytes.
SyntheticAssets gen_synthetic_assets(std::uint64_t seed, const SyntheticSpec& spec,
                                     const std::filesystem::path& out_dir);

PlantedTruth load_ground_truth(const std::filesystem::path& path);

}  // namespace dcp
