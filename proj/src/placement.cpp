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

#include "dcp/placement.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "dcp/resample.hpp"

namespace dcp {

namespace {

void check_weight(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be a finite value >= 0", name));
  }
}

struct Lattice {
  int rows;
  int cols;
};

Lattice make_lattice(int bg_h, int bg_w, WindowSize fg, int stride) {
  if (stride < 1) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("stride must be >= 1, got {}", stride));
  }
  if (fg.h < 1 || fg.w < 1) throw Error(ErrorCode::kInvalidArgument, "window extent must be positive");
  if (fg.h > bg_h || fg.w > bg_w) {
    throw Error(ErrorCode::kFgTooLarge, fmt::format("foreground {}x{} exceeds background {}x{}",
                                                    fg.w, fg.h, bg_w, bg_h));
  }
  return Lattice{(bg_h - fg.h) / stride + 1, (bg_w - fg.w) / stride + 1};
}

// Raw per-candidate terms: depth-level deviation, depth-variance deviation
// and mean gradient magnitude.
struct Terms {
  std::vector<double> level;
  std::vector<double> spread;
  std::vector<double> rough;
};

double normalized_term(double value, double max) { return max > 0.0 ? 1.0 - value / max : 1.0; }

PlacementResult combine(const Terms& terms, Lattice lattice, WindowSize fg, int stride,
                        const PlacementWeights& weights) {
  const double max_level = *std::max_element(terms.level.begin(), terms.level.end());
  const double max_spread = *std::max_element(terms.spread.begin(), terms.spread.end());
  const double max_rough = *std::max_element(terms.rough.begin(), terms.rough.end());

  PlacementResult result;
  result.stride = stride;
  result.window = fg;
  result.score_grid = DoubleGrid(lattice.cols, lattice.rows);
  double best = -1.0;
  auto grid = result.score_grid.data();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = weights.alpha() * normalized_term(terms.level[i], max_level) +
                     weights.beta() * normalized_term(terms.spread[i], max_spread) +
                     weights.gamma() * normalized_term(terms.rough[i], max_rough);
    grid[i] = std::clamp(s, 0.0, 1.0);
    // Row-major scan with strict improvement keeps the smallest (x, y).
    if (grid[i] > best) {
      best = grid[i];
      result.x = static_cast<int>(i / lattice.cols) * stride;
      result.y = static_cast<int>(i % lattice.cols) * stride;
    }
  }
  result.score = best;
  return result;
}

}  // namespace

PlacementWeights::PlacementWeights(double alpha, double beta, double gamma) {
  check_weight(alpha, "alpha");
  check_weight(beta, "beta");
  check_weight(gamma, "gamma");
  const double total = alpha + beta + gamma;
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha + beta + gamma must be > 0");
  alpha_ = alpha / total;
  beta_ = beta / total;
  gamma_ = gamma / total;
}

NormalizedDepthMap normalize_depth(const DepthMap& depth) {
  const auto values = depth.values().data();
  FloatGrid out(depth.width(), depth.height(), 0.0f);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return NormalizedDepthMap(std::move(out));

  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (float v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (float v : values) sq += (v - mean) * (v - mean);
  const double sigma = std::sqrt(sq / n);
  if (sigma < kConstantSigma) return NormalizedDepthMap(std::move(out));

  auto dst = out.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    dst[i] = static_cast<float>((values[i] - mean) / sigma);
  }
  return NormalizedDepthMap(std::move(out));
}

ForegroundDepthStats foreground_depth_stats(const NormalizedDepthMap& depth,
                                            const BinaryMask& mask) {
  require_same_shape(depth, mask, "foreground depth and mask dimensions differ");
  const auto values = depth.values().data();
  const auto on = mask.values().data();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (on[i]) {
      sum += values[i];
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorCode::kEmptyMask, "foreground mask is empty");
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (on[i]) sq += (values[i] - mean) * (values[i] - mean);
  }
  return ForegroundDepthStats{mean, std::sqrt(sq / static_cast<double>(n))};
}

FloatGrid gradient_magnitude(const NormalizedDepthMap& depth) {
  const int h = depth.height();
  const int w = depth.width();
  if (h < 2 || w < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("gradient needs at least 2x2 samples, got {}x{}", w, h));
  }
  const FloatGrid& d = depth.values();
  FloatGrid out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double gr;
      if (r == 0) {
        gr = static_cast<double>(d(1, c)) - d(0, c);
      } else if (r == h - 1) {
        gr = static_cast<double>(d(h - 1, c)) - d(h - 2, c);
      } else {
        gr = (static_cast<double>(d(r + 1, c)) - d(r - 1, c)) / 2.0;
      }
      double gc;
      if (c == 0) {
        gc = static_cast<double>(d(r, 1)) - d(r, 0);
      } else if (c == w - 1) {
        gc = static_cast<double>(d(r, w - 1)) - d(r, w - 2);
      } else {
        gc = (static_cast<double>(d(r, c + 1)) - d(r, c - 1)) / 2.0;
      }
      out(r, c) = static_cast<float>(std::sqrt(gr * gr + gc * gc));
    }
  }
  return out;
}

PreparedBackground::PreparedBackground(const NormalizedDepthMap& depth)
    : depth_(depth),
      gradient_(gradient_magnitude(depth)),
      depth_table_(IntegralTable::build(depth.values())),
      gradient_table_(IntegralTable::build(gradient_)) {}

PlacementResult score_windows(const PreparedBackground& background,
                              const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                              const PlacementWeights& weights, int stride) {
  const Lattice lattice = make_lattice(background.height(), background.width(), fg_size, stride);
  const std::size_t n = static_cast<std::size_t>(lattice.rows) * lattice.cols;
  Terms terms{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  const IntegralTable& depth = background.depth_table();
  const IntegralTable& grad = background.gradient_table();
  const double area = static_cast<double>(fg_size.h) * fg_size.w;
  for (int i = 0; i < lattice.rows; ++i) {
    const int x = i * stride;
    for (int j = 0; j < lattice.cols; ++j) {
      const int y = j * stride;
      const std::size_t k = static_cast<std::size_t>(i) * lattice.cols + j;
      const double mean = depth.rect_mean(x, y, fg_size.h, fg_size.w);
      const double sigma = std::sqrt(depth.rect_variance(x, y, fg_size.h, fg_size.w));
      terms.level[k] = std::abs(mean - fg_stats.mean);
      terms.spread[k] = std::abs(sigma - fg_stats.std);
      terms.rough[k] = grad.rect_sum(x, y, fg_size.h, fg_size.w) / area;
    }
  }
  return combine(terms, lattice, fg_size, stride, weights);
}

PlacementResult score_windows(const NormalizedDepthMap& background,
                              const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                              const PlacementWeights& weights, int stride) {
  return score_windows(PreparedBackground(background), fg_stats, fg_size, weights, stride);
}

PlacementResult score_windows_naive(const NormalizedDepthMap& background,
                                    const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                                    const PlacementWeights& weights, int stride) {
  const Lattice lattice = make_lattice(background.height(), background.width(), fg_size, stride);
  const FloatGrid gradient = gradient_magnitude(background);
  const FloatGrid& d = background.values();
  const std::size_t n = static_cast<std::size_t>(lattice.rows) * lattice.cols;
  Terms terms{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  const double area = static_cast<double>(fg_size.h) * fg_size.w;
  for (int i = 0; i < lattice.rows; ++i) {
    for (int j = 0; j < lattice.cols; ++j) {
      const int x = i * stride;
      const int y = j * stride;
      double sum = 0.0;
      double grad_sum = 0.0;
      for (int r = x; r < x + fg_size.h; ++r) {
        for (int c = y; c < y + fg_size.w; ++c) {
          sum += d(r, c);
          grad_sum += gradient(r, c);
        }
      }
      const double mean = sum / area;
      double sq = 0.0;
      for (int r = x; r < x + fg_size.h; ++r) {
        for (int c = y; c < y + fg_size.w; ++c) sq += (d(r, c) - mean) * (d(r, c) - mean);
      }
      const std::size_t k = static_cast<std::size_t>(i) * lattice.cols + j;
      terms.level[k] = std::abs(mean - fg_stats.mean);
      terms.spread[k] = std::abs(std::sqrt(sq / area) - fg_stats.std);
      terms.rough[k] = grad_sum / area;
    }
  }
  return combine(terms, lattice, fg_size, stride, weights);
}

PlacementResult place_with_scales(const PreparedBackground& background,
                                  const PlacementForeground& foreground,
                                  const PlacementWeights& weights, int stride,
                                  const std::vector<double>& scales) {
  require_same_shape(foreground.depth, foreground.mask,
                     "foreground depth and mask dimensions differ");
  if (scales.empty()) throw Error(ErrorCode::kInvalidArgument, "scale list is empty");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("scale {} must be finite and > 0", s));
    }
  }

  std::optional<PlacementResult> best;
  for (double s : scales) {
    const WindowSize size{scaled_extent(foreground.depth.height(), s),
                          scaled_extent(foreground.depth.width(), s)};
    if (size.h > background.height() || size.w > background.width()) continue;
    const BinaryMask mask = resize_nearest(foreground.mask, size.w, size.h);
    if (mask.empty()) continue;
    const NormalizedDepthMap depth(resize_bilinear(foreground.depth.values(), size.w, size.h));
    PlacementResult result =
        score_windows(background, foreground_depth_stats(depth, mask), size, weights, stride);
    result.scale = s;
    if (!best || result.score > best->score) best = std::move(result);
  }
  if (!best) throw Error(ErrorCode::kNoFeasibleScale, "foreground fits the background at no scale");
  return std::move(*best);
}

}  // namespace dcp
