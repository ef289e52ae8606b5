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

#include "dcp/resample.hpp"

#include <algorithm>
#include <cmath>

namespace dcp {

namespace {

// Source sample position and blend weight for one output coordinate, using
// pixel-center alignment.
struct Tap {
  int lo;
  int hi;
  double frac;
};

Tap bilinear_tap(int dst, int dst_n, int src_n) {
  const double pos = (dst + 0.5) * (static_cast<double>(src_n) / dst_n) - 0.5;
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(src_n - 1));
  const int lo = static_cast<int>(std::floor(clamped));
  const int hi = std::min(lo + 1, src_n - 1);
  return Tap{lo, hi, clamped - lo};
}

int nearest_index(int dst, int dst_n, int src_n) {
  const int idx = static_cast<int>(std::floor((dst + 0.5) * src_n / dst_n));
  return std::clamp(idx, 0, src_n - 1);
}

}  // namespace

int scaled_extent(int extent, double scale) {
  return std::max(1, static_cast<int>(std::lround(extent * scale)));
}

FloatGrid resize_bilinear(const FloatGrid& grid, int width, int height) {
  if (width == grid.width() && height == grid.height()) return grid;
  FloatGrid out(width, height);
  for (int r = 0; r < height; ++r) {
    const Tap tr = bilinear_tap(r, height, grid.height());
    for (int c = 0; c < width; ++c) {
      const Tap tc = bilinear_tap(c, width, grid.width());
      const double top = grid(tr.lo, tc.lo) * (1.0 - tc.frac) + grid(tr.lo, tc.hi) * tc.frac;
      const double bottom = grid(tr.hi, tc.lo) * (1.0 - tc.frac) + grid(tr.hi, tc.hi) * tc.frac;
      out(r, c) = static_cast<float>(top * (1.0 - tr.frac) + bottom * tr.frac);
    }
  }
  return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height) {
  if (width == image.width() && height == image.height()) return image;
  ImageBuffer out(width, height, image.channels());
  for (int r = 0; r < height; ++r) {
    const Tap tr = bilinear_tap(r, height, image.height());
    for (int c = 0; c < width; ++c) {
      const Tap tc = bilinear_tap(c, width, image.width());
      for (int ch = 0; ch < image.channels(); ++ch) {
        const double top =
            image(tr.lo, tc.lo, ch) * (1.0 - tc.frac) + image(tr.lo, tc.hi, ch) * tc.frac;
        const double bottom =
            image(tr.hi, tc.lo, ch) * (1.0 - tc.frac) + image(tr.hi, tc.hi, ch) * tc.frac;
        const double v = top * (1.0 - tr.frac) + bottom * tr.frac;
        out(r, c, ch) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int width, int height) {
  if (width == mask.width() && height == mask.height()) return mask;
  Grid<std::uint8_t> out(width, height);
  for (int r = 0; r < height; ++r) {
    const int sr = nearest_index(r, height, mask.height());
    for (int c = 0; c < width; ++c) {
      out(r, c) = mask.values()(sr, nearest_index(c, width, mask.width()));
    }
  }
  return BinaryMask(std::move(out));
}

}  // namespace dcp
