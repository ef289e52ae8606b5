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

// Pixelwise AND. Throws kDimensionMismatch on differing shapes.
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);

// Keeps only the largest 4-connected component. On equal sizes the component
// whose first pixel comes first in row-major order wins. Throws kEmptyMask.
BinaryMask largest_component(const BinaryMask& mask);

// Tight bounding box of the set pixels; an empty Rect for an empty mask.
Rect bounding_box(const BinaryMask& mask);

// Crops to `box`, which must lie within the grid.
BinaryMask crop(const BinaryMask& mask, const Rect& box);
ImageBuffer crop(const ImageBuffer& image, const Rect& box);

template <typename T>
Grid<T> crop(const Grid<T>& grid, const Rect& box) {
  if (box.empty() || box.x < 0 || box.y < 0 || box.x + box.h > grid.height() ||
      box.y + box.w > grid.width()) {
    throw Error(ErrorCode::kOutOfBounds, "crop rectangle outside the grid");
  }
  Grid<T> out(box.w, box.h);
  for (int r = 0; r < box.h; ++r) {
    for (int c = 0; c < box.w; ++c) out(r, c) = grid(box.x + r, box.y + c);
  }
  return out;
}

}  // namespace dcp
