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

#include <vector>

#include "dcp/grid.hpp"

namespace dcp {

// Summed-area tables of values and squared values with 64-bit accumulation.
// Entry (r, c) of each table holds the sum over rows [0, r) x cols [0, c).
class IntegralTable {
 public:
  template <typename T>
  static IntegralTable build(const Grid<T>& grid);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  // Sums over rows [row, row + h) x cols [col, col + w).
  double rect_sum(int row, int col, int h, int w) const;
  double rect_sum_squares(int row, int col, int h, int w) const;

  // Population mean/variance of the rectangle; variance is clamped at 0.
  double rect_mean(int row, int col, int h, int w) const;
  double rect_variance(int row, int col, int h, int w) const;

  double sum_at(int r, int c) const { return sum_[index(r, c)]; }
  double sum_squares_at(int r, int c) const { return sum_sq_[index(r, c)]; }

 private:
  IntegralTable(int width, int height);
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * (width_ + 1) + c;
  }
  double query(const std::vector<double>& table, int row, int col, int h, int w) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

template <typename T>
IntegralTable IntegralTable::build(const Grid<T>& grid) {
  IntegralTable table(grid.width(), grid.height());
  for (int r = 0; r < grid.height(); ++r) {
    double row_sum = 0.0;
    double row_sq = 0.0;
    for (int c = 0; c < grid.width(); ++c) {
      const double v = static_cast<double>(grid(r, c));
      row_sum += v;
      row_sq += v * v;
      table.sum_[table.index(r + 1, c + 1)] = table.sum_[table.index(r, c + 1)] + row_sum;
      table.sum_sq_[table.index(r + 1, c + 1)] = table.sum_sq_[table.index(r, c + 1)] + row_sq;
    }
  }
  return table;
}

}  // namespace dcp
