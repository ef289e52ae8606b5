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

#include "dcp/grid.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dcp {

namespace {

void check_image_shape(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kEmptyGrid, "image dimensions must be positive");
  }
  if (channels != 3 && channels != 4) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("images carry 3 or 4 channels, got {}", channels));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_image_shape(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_image_shape(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::kDimensionMismatch, "image payload length does not match dimensions");
  }
}

DepthMap::DepthMap(FloatGrid values) : values_(std::move(values)) {
  const auto data = values_.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw Error(ErrorCode::kNonFinite, fmt::format("depth value at index {} is not finite", i), i);
    }
  }
}

BinaryMask::BinaryMask(Grid<std::uint8_t> values) : values_(std::move(values)) {
  const auto data = values_.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] > 1) {
      throw Error(ErrorCode::kInvalidMaskValue,
                  fmt::format("mask value {} at index {} is not 0 or 1", data[i], i), i);
    }
  }
}

BinaryMask BinaryMask::filled(int width, int height, bool on) {
  return BinaryMask(Grid<std::uint8_t>(width, height, on ? 1 : 0));
}

std::size_t BinaryMask::count() const {
  const auto data = values_.data();
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

}  // namespace dcp
