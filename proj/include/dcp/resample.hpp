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

// round(extent * scale), at least 1.
int scaled_extent(int extent, double scale);

// Resizes to width x height. Equal dimensions return an exact copy.
FloatGrid resize_bilinear(const FloatGrid& grid, int width, int height);
ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height);
BinaryMask resize_nearest(const BinaryMask& mask, int width, int height);

}  // namespace dcp
