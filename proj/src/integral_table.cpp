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

#include "dcp/integral_table.hpp"

#include <algorithm>

namespace dcp {

IntegralTable::IntegralTable(int width, int height)
    : width_(width),
      height_(height),
      sum_(static_cast<std::size_t>(width + 1) * (height + 1), 0.0),
      sum_sq_(sum_.size(), 0.0) {}

double IntegralTable::query(const std::vector<double>& table, int row, int col, int h,
                            int w) const {
  if (row < 0 || col < 0 || h < 0 || w < 0 || row + h > height_ || col + w > width_) {
    throw Error(ErrorCode::kOutOfBounds, "integral table query outside the grid");
  }
  return table[index(row + h, col + w)] - table[index(row, col + w)] -
         table[index(row + h, col)] + table[index(row, col)];
}

double IntegralTable::rect_sum(int row, int col, int h, int w) const {
  return query(sum_, row, col, h, w);
}

double IntegralTable::rect_sum_squares(int row, int col, int h, int w) const {
  return query(sum_sq_, row, col, h, w);
}

double IntegralTable::rect_mean(int row, int col, int h, int w) const {
  return rect_sum(row, col, h, w) / (static_cast<double>(h) * w);
}

double IntegralTable::rect_variance(int row, int col, int h, int w) const {
  const double n = static_cast<double>(h) * w;
  const double mean = rect_sum(row, col, h, w) / n;
  return std::max(0.0, rect_sum_squares(row, col, h, w) / n - mean * mean);
}

}  // namespace dcp
