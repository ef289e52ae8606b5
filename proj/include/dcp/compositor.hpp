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

#include <optional>
#include <string>
#include <vector>

#include "dcp/grid.hpp"
#include "dcp/placement.hpp"

namespace dcp {

inline constexpr double kDefaultDifficultThreshold = 0.2;

struct Annotation {
  std::string label = "face";
  Rect box;  // composite coordinates, clipped
  std::string source_foreground_id;
  double visible_fraction = 1.0;
  bool difficult = false;  // visible_fraction below the configured threshold

  bool operator==(const Annotation&) const = default;
};

struct Provenance {
  std::string foreground_id;
  std::string background_id;
  PlacementResult placement;
  std::string config_hash;
};

struct CompositeSample {
  ImageBuffer image;
  std::vector<Annotation> annotations;
  Provenance provenance;
};

// Radius 0 casts the mask to {0, 1}; radius r applies a 3x3 box blur r times,
// averaging over in-bounds neighbors only, so all-ones regions stay exactly 1.
FloatGrid feather_mask(const BinaryMask& mask, int radius);

// out = a * fg + (1 - a) * bg per channel, rounded half-up, over the region
// of `fg` placed at (x, y). Pixels with a == 0 keep the background bytes.
ImageBuffer alpha_composite(const ImageBuffer& background, const ImageBuffer& fg,
                            const FloatGrid& alpha, int x, int y);

// Scales the foreground (bilinear RGB, nearest mask), feathers the scaled
// mask and alpha-composites it at (x, y). Throws kOutOfBounds.
ImageBuffer paste(const ImageBuffer& background, const ImageBuffer& fg_rgba,
                  const BinaryMask& fg_mask, int x, int y, double scale, int feather_radius);

struct CompositeDims {
  int width = 0;
  int height = 0;
};

// Maps a face box from foreground to composite coordinates and clips it.
// Returns nullopt when the clipped box is empty or no face pixel is visible.
std::optional<Annotation> transform_annotation(const Rect& face_box, const BinaryMask& mask,
                                               int x, int y, double scale, CompositeDims dims,
                                               const std::string& source_foreground_id,
                                               double difficult_threshold =
                                                   kDefaultDifficultThreshold);

}  // namespace dcp
