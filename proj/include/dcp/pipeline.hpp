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

#include <filesystem>
#include <string>
#include <vector>

#include "dcp/compositor.hpp"
#include "dcp/config.hpp"
#include "dcp/extraction.hpp"
#include "dcp/manifest.hpp"
#include "dcp/placement.hpp"

namespace dcp {

// An extracted foreground cropped to the bounding box of its mask, with the
// depth z-scored over the whole source image before cropping.
struct PreparedForeground {
  ImageBuffer rgba;
  BinaryMask mask;
  PlacementForeground placement;
  Rect crop;      // in source image coordinates
  Rect face_box;  // relative to the crop and clipped to it; empty if disjoint
  long long face_area = 0;  // area of the unclipped face box
};

PreparedForeground prepare_foreground(const ForegroundAsset& asset,
                                      const VisibilityParams& params, bool cleanup);

// Annotation for a prepared foreground pasted at (x, y). The visible fraction
// is measured against the full face box, so parts cut off by the crop count
// as occluded.
std::optional<Annotation> annotate(const PreparedForeground& fg, int x, int y, double scale,
                                   CompositeDims dims, const std::string& foreground_id,
                                   double difficult_threshold);

ForegroundAsset load_foreground(const ForegroundRecord& record);

struct RunOptions {
  unsigned threads = 0;  // 0 reads DCP_THREADS
  bool retain_images = false;
};

struct SkipRecord {
  std::string foreground_id;
  std::string background_id;  // empty for foreground-level skips
  std::string code;
  std::string reason;
};

struct RunResult {
  std::vector<CompositeSample> samples;  // images empty unless retain_images
  DatasetManifest manifest;
  std::vector<SkipRecord> skips;
  std::filesystem::path manifest_path;
};

// Retrieve -> extract -> place -> composite for every foreground. Writes
// images/, manifest.json, annotations.coco.json and run.log.jsonl under
// config.output_dir. Missing files, malformed manifests and unreadable
// backgrounds are fatal; foregrounds that fail to load or extract are skipped
// and logged. Output order is fixed by (foreground id, rank).
RunResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& foregrounds,
                       const std::filesystem::path& backgrounds, const RunOptions& options = {});

std::string composite_file_name(const std::string& bg_id, const std::string& fg_id, int x, int y,
                                double scale);

}  // namespace dcp
