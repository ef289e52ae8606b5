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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dcp/error.hpp"

namespace dcp {

// Axis-aligned rectangle. `x` is the row of the top-left corner and `y` its
// column; `h` spans rows and `w` spans columns.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const { return static_cast<long long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  bool operator==(const Rect&) const = default;
};

// Row-major dense 2-D grid. Dimensions are fixed at construction.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(checked(width)), height_(checked(height)),
        data_(static_cast<std::size_t>(width_) * height_, fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(checked(width)), height_(checked(height)), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * height_) {
      throw Error(ErrorCode::kDimensionMismatch, "grid payload length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  const T& operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  T& operator()(int row, int col) {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }
  std::span<const T> row(int r) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(r) * width_, width_);
  }

  bool operator==(const Grid&) const = default;

 private:
  static int checked(int extent) {
    if (extent <= 0) throw Error(ErrorCode::kEmptyGrid, "grid dimensions must be positive");
    return extent;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using FloatGrid = Grid<float>;
using DoubleGrid = Grid<double>;

// 8-bit interleaved RGB or RGBA image.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, std::uint8_t fill = 0);
  ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool has_alpha() const noexcept { return channels_ == 4; }

  std::uint8_t operator()(int row, int col, int ch) const {
    return data_[offset(row, col) + ch];
  }
  std::uint8_t& operator()(int row, int col, int ch) {
    return data_[offset(row, col) + ch];
  }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

// Scale-free relative depth, larger = farther. Every value is finite.
class DepthMap {
 public:
  explicit DepthMap(FloatGrid values);

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  float operator()(int row, int col) const { return values_(row, col); }
  const FloatGrid& values() const noexcept { return values_; }

  bool operator==(const DepthMap&) const = default;

 private:
  FloatGrid values_;
};

// Z-scored depth as produced by normalize_depth(). Constructing one directly
// adopts the values as-is; no normalization is checked or applied.
class NormalizedDepthMap {
 public:
  explicit NormalizedDepthMap(FloatGrid values) : values_(std::move(values)) {}

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  float operator()(int row, int col) const { return values_(row, col); }
  const FloatGrid& values() const noexcept { return values_; }

  bool operator==(const NormalizedDepthMap&) const = default;

 private:
  FloatGrid values_;
};

// Mask with values strictly in {0, 1}.
class BinaryMask {
 public:
  explicit BinaryMask(Grid<std::uint8_t> values);
  static BinaryMask filled(int width, int height, bool on);

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  bool operator()(int row, int col) const { return values_(row, col) != 0; }
  const Grid<std::uint8_t>& values() const noexcept { return values_; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  bool operator==(const BinaryMask&) const = default;

 private:
  Grid<std::uint8_t> values_;
};

void require_same_shape(const auto& a, const auto& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kDimensionMismatch, what);
  }
}

}  // namespace dcp
