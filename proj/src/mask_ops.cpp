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

#include "dcp/mask_ops.hpp"

#include <algorithm>
#include <vector>

namespace dcp {

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_and requires masks of identical dimensions");
  Grid<std::uint8_t> out(a.width(), a.height());
  const auto da = a.values().data();
  const auto db = b.values().data();
  auto dout = out.data();
  for (std::size_t i = 0; i < dout.size(); ++i) dout[i] = da[i] & db[i];
  return BinaryMask(std::move(out));
}

BinaryMask largest_component(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<int> stack;
  int best_label = -1;
  std::size_t best_size = 0;
  int next_label = 0;

  for (int start = 0; start < w * h; ++start) {
    if (!mask.values().data()[start] || label[start] >= 0) continue;
    const int id = next_label++;
    std::size_t size = 0;
    label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      ++size;
      const int r = p / w;
      const int c = p % w;
      auto visit = [&](int rr, int cc) {
        if (rr < 0 || cc < 0 || rr >= h || cc >= w) return;
        const int q = rr * w + cc;
        if (mask.values().data()[q] && label[q] < 0) {
          label[q] = id;
          stack.push_back(q);
        }
      };
      visit(r - 1, c);
      visit(r + 1, c);
      visit(r, c - 1);
      visit(r, c + 1);
    }
    // Strict comparison keeps the earliest component on ties.
    if (size > best_size) {
      best_size = size;
      best_label = id;
    }
  }
  if (best_label < 0) throw Error(ErrorCode::kEmptyMask, "largest_component of an empty mask");

  Grid<std::uint8_t> out(w, h);
  auto dout = out.data();
  for (std::size_t i = 0; i < dout.size(); ++i) dout[i] = label[i] == best_label ? 1 : 0;
  return BinaryMask(std::move(out));
}

Rect bounding_box(const BinaryMask& mask) {
  int r0 = mask.height(), r1 = -1, c0 = mask.width(), c1 = -1;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) return Rect{};
  return Rect{r0, c0, c1 - c0 + 1, r1 - r0 + 1};
}

BinaryMask crop(const BinaryMask& mask, const Rect& box) {
  return BinaryMask(crop(mask.values(), box));
}

ImageBuffer crop(const ImageBuffer& image, const Rect& box) {
  if (box.empty() || box.x < 0 || box.y < 0 || box.x + box.h > image.height() ||
      box.y + box.w > image.width()) {
    throw Error(ErrorCode::kOutOfBounds, "crop rectangle outside the image");
  }
  ImageBuffer out(box.w, box.h, image.channels());
  for (int r = 0; r < box.h; ++r) {
    for (int c = 0; c < box.w; ++c) {
      for (int ch = 0; ch < image.channels(); ++ch) out(r, c, ch) = image(box.x + r, box.y + c, ch);
    }
  }
  return out;
}

}  // namespace dcp
