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

#include "dcp/compositor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dcp/resample.hpp"

namespace dcp {

namespace {

std::uint8_t blend(double a, std::uint8_t fg, std::uint8_t bg) {
  const double v = a * fg + (1.0 - a) * bg;
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

FloatGrid feather_mask(const BinaryMask& mask, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "feather radius must be >= 0");
  const int h = mask.height();
  const int w = mask.width();
  FloatGrid current(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) current(r, c) = mask(r, c) ? 1.0f : 0.0f;
  }
  for (int pass = 0; pass < radius; ++pass) {
    FloatGrid next(w, h);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double sum = 0.0;
        int n = 0;
        for (int rr = std::max(0, r - 1); rr <= std::min(h - 1, r + 1); ++rr) {
          for (int cc = std::max(0, c - 1); cc <= std::min(w - 1, c + 1); ++cc) {
            sum += current(rr, cc);
            ++n;
          }
        }
        next(r, c) = static_cast<float>(std::clamp(sum / n, 0.0, 1.0));
      }
    }
    current = std::move(next);
  }
  return current;
}

ImageBuffer alpha_composite(const ImageBuffer& background, const ImageBuffer& fg,
                            const FloatGrid& alpha, int x, int y) {
  require_same_shape(fg, alpha, "foreground and alpha dimensions differ");
  if (x < 0 || y < 0 || x + fg.height() > background.height() ||
      y + fg.width() > background.width()) {
    throw Error(ErrorCode::kOutOfBounds,
                fmt::format("{}x{} foreground at ({}, {}) leaves the {}x{} background", fg.width(),
                            fg.height(), x, y, background.width(), background.height()));
  }
  ImageBuffer out = background;
  const int color = 3;
  for (int r = 0; r < fg.height(); ++r) {
    for (int c = 0; c < fg.width(); ++c) {
      const double a = alpha(r, c);
      if (a <= 0.0) continue;
      for (int ch = 0; ch < color; ++ch) {
        out(x + r, y + c, ch) = a >= 1.0 ? fg(r, c, ch) : blend(a, fg(r, c, ch), background(x + r, y + c, ch));
      }
      if (out.has_alpha()) out(x + r, y + c, 3) = blend(a, 255, background(x + r, y + c, 3));
    }
  }
  return out;
}

ImageBuffer paste(const ImageBuffer& background, const ImageBuffer& fg_rgba,
                  const BinaryMask& fg_mask, int x, int y, double scale, int feather_radius) {
  require_same_shape(fg_rgba, fg_mask, "foreground image and mask dimensions differ");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("scale {} must be finite and > 0", scale));
  }
  const int w = scaled_extent(fg_rgba.width(), scale);
  const int h = scaled_extent(fg_rgba.height(), scale);
  const ImageBuffer fg = resize_bilinear(fg_rgba, w, h);
  const BinaryMask mask = resize_nearest(fg_mask, w, h);
  return alpha_composite(background, fg, feather_mask(mask, feather_radius), x, y);
}

std::optional<Annotation> transform_annotation(const Rect& face_box, const BinaryMask& mask,
                                               int x, int y, double scale, CompositeDims dims,
                                               const std::string& source_foreground_id,
                                               double difficult_threshold) {
  if (face_box.empty() || face_box.x < 0 || face_box.y < 0 ||
      face_box.x + face_box.h > mask.height() || face_box.y + face_box.w > mask.width()) {
    throw Error(ErrorCode::kOutOfBounds, "face box outside the foreground");
  }
  std::size_t visible = 0;
  for (int r = face_box.x; r < face_box.x + face_box.h; ++r) {
    for (int c = face_box.y; c < face_box.y + face_box.w; ++c) visible += mask(r, c) ? 1 : 0;
  }
  const double fraction = static_cast<double>(visible) / static_cast<double>(face_box.area());
  if (visible == 0) return std::nullopt;

  const auto scaled = [scale](int v) { return static_cast<int>(std::lround(scale * v)); };
  const int r0 = x + scaled(face_box.x);
  const int c0 = y + scaled(face_box.y);
  const int r1 = r0 + scaled(face_box.h);
  const int c1 = c0 + scaled(face_box.w);
  const int cr0 = std::clamp(r0, 0, dims.height);
  const int cc0 = std::clamp(c0, 0, dims.width);
  const int cr1 = std::clamp(r1, 0, dims.height);
  const int cc1 = std::clamp(c1, 0, dims.width);
  if (cr1 <= cr0 || cc1 <= cc0) return std::nullopt;

  Annotation a;
  a.box = Rect{cr0, cc0, cc1 - cc0, cr1 - cr0};
  a.source_foreground_id = source_foreground_id;
  a.visible_fraction = fraction;
  a.difficult = fraction < difficult_threshold;
  return a;
}

}  // namespace dcp
