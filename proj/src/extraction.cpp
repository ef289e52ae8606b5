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

#include "dcp/extraction.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dcp/integral_table.hpp"
#include "dcp/mask_ops.hpp"

namespace dcp {

void validate(const VisibilityParams& params) {
  if (!(params.tau >= 0.0) || !std::isfinite(params.tau)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("tau must be >= 0, got {}", params.tau));
  }
  if (params.radius < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("radius must be >= 1, got {}", params.radius));
  }
}

void validate(const ForegroundAsset& asset) {
  require_same_shape(asset.image, asset.seg_mask, "foreground image and mask dimensions differ");
  require_same_shape(asset.image, asset.depth, "foreground image and depth dimensions differ");
  const Rect& b = asset.face_box;
  if (b.empty() || b.x < 0 || b.y < 0 || b.x + b.h > asset.image.height() ||
      b.y + b.w > asset.image.width()) {
    throw Error(ErrorCode::kOutOfBounds,
                fmt::format("face box ({}, {}, {}, {}) outside {}x{} image", b.x, b.y, b.w, b.h,
                            asset.image.width(), asset.image.height()));
  }
}

DoubleGrid rescale_unit(const DepthMap& depth) {
  const auto values = depth.values().data();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  DoubleGrid out(depth.width(), depth.height(), 0.0);
  if (*lo == *hi) return out;
  const double min = *lo;
  const double range = static_cast<double>(*hi) - min;
  auto dst = out.data();
  for (std::size_t i = 0; i < values.size(); ++i) dst[i] = (values[i] - min) / range;
  return out;
}

DoubleGrid local_depth_deviation(const DepthMap& depth, const VisibilityParams& params) {
  validate(params);
  const DoubleGrid unit = rescale_unit(depth);
  const IntegralTable table = IntegralTable::build(unit);
  const int r = params.radius;
  const int h = depth.height();
  const int w = depth.width();
  DoubleGrid delta(w, h, 0.0);
  for (int row = 0; row < h; ++row) {
    const int r0 = std::max(0, row - r);
    const int r1 = std::min(h, row + r + 1);
    for (int col = 0; col < w; ++col) {
      const int c0 = std::max(0, col - r);
      const int c1 = std::min(w, col + r + 1);
      const int count = (r1 - r0) * (c1 - c0) - 1;
      if (count == 0) continue;  // 1x1 map: no neighbors
      const double center = unit(row, col);
      const double neighbors = table.rect_sum(r0, c0, r1 - r0, c1 - c0) - center;
      delta(row, col) = std::abs(center - neighbors / count);
    }
  }
  return delta;
}

BinaryMask visibility_mask(const DepthMap& depth, const VisibilityParams& params) {
  const DoubleGrid delta = local_depth_deviation(depth, params);
  Grid<std::uint8_t> out(depth.width(), depth.height());
  const auto src = delta.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] < params.tau ? 1 : 0;
  return BinaryMask(std::move(out));
}

ExtractedForeground extract_foreground(const ForegroundAsset& asset,
                                       const VisibilityParams& params, bool cleanup) {
  validate(asset);
  validate(params);
  if (asset.seg_mask.empty()) {
    throw Error(ErrorCode::kEmptyForeground, "segmentation mask is empty");
  }
  BinaryMask mask = mask_and(asset.seg_mask, visibility_mask(asset.depth, params));
  if (mask.empty()) {
    throw Error(ErrorCode::kEmptyForeground, "no visible foreground pixels remain");
  }
  if (cleanup) mask = largest_component(mask);

  ImageBuffer rgba(asset.image.width(), asset.image.height(), 4, 0);
  for (int r = 0; r < rgba.height(); ++r) {
    for (int c = 0; c < rgba.width(); ++c) {
      if (!mask(r, c)) continue;
      for (int ch = 0; ch < 3; ++ch) rgba(r, c, ch) = asset.image(r, c, ch);
      rgba(r, c, 3) = 255;
    }
  }
  return ExtractedForeground{std::move(rgba), std::move(mask)};
}

}  // namespace dcp
