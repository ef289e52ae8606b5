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

#include "dcp/grid.hpp"

namespace dcp {

struct VisibilityParams {
  // Threshold on the deviation of min-max rescaled depth. A pixel is visible
  // iff its deviation is strictly below tau.
  double tau = 0.05;
  // Neighborhood half-width: the (2r+1)^2 square around p, minus p, clipped
  // at the image border.
  int radius = 2;
};

struct ForegroundAsset {
  ImageBuffer image;
  BinaryMask seg_mask;
  DepthMap depth;
  Rect face_box;  // in image coordinates
};

struct ExtractedForeground {
  ImageBuffer rgba;  // RGB zeroed and alpha 0 outside the mask, alpha 255 inside
  BinaryMask mask;
};

void validate(const VisibilityParams& params);
// Dimension and face-box checks. An empty segmentation mask is reported by
// extract_foreground() instead.
void validate(const ForegroundAsset& asset);

// (D - min) / (max - min); all zeros for a constant map.
DoubleGrid rescale_unit(const DepthMap& depth);

// |D(p) - mean of D over N(p)| on the rescaled depth, for every pixel.
DoubleGrid local_depth_deviation(const DepthMap& depth, const VisibilityParams& params);

BinaryMask visibility_mask(const DepthMap& depth, const VisibilityParams& params);

// mask = seg_mask AND visibility_mask(depth), optionally reduced to its largest
// 4-connected component. Throws kEmptyForeground when nothing survives.
ExtractedForeground extract_foreground(const ForegroundAsset& asset,
                                       const VisibilityParams& params, bool cleanup);

}  // namespace dcp
