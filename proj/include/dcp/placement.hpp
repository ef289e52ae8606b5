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
#include "dcp/integral_table.hpp"

namespace dcp {

// Non-negative weights of the depth-level, depth-variance and smoothness
// terms, stored renormalized to sum to 1.
class PlacementWeights {
 public:
  PlacementWeights() : PlacementWeights(1.0, 1.0, 1.0) {}
  PlacementWeights(double alpha, double beta, double gamma);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

struct ForegroundDepthStats {
  double mean = 0.0;
  double std = 0.0;  // population
};

struct WindowSize {
  int h = 0;  // rows
  int w = 0;  // cols
};

struct PlacementResult {
  int x = 0;  // row of the top-left corner
  int y = 0;  // col of the top-left corner
  double scale = 1.0;
  double score = 0.0;
  int stride = 1;
  WindowSize window;
  // Cell (i, j) holds the score of the window at (i * stride, j * stride).
  DoubleGrid score_grid;
};

// A z-scored foreground: its depth (normalized over the full source image)
// and its mask, both cropped to the same extent.
struct PlacementForeground {
  NormalizedDepthMap depth;
  BinaryMask mask;
};

inline constexpr double kConstantSigma = 1e-8;

// (D - mean) / std with population statistics. Maps with std below
// kConstantSigma become all zeros.
NormalizedDepthMap normalize_depth(const DepthMap& depth);

// Mean and population std of the depth under the mask. Throws kEmptyMask.
ForegroundDepthStats foreground_depth_stats(const NormalizedDepthMap& depth,
                                            const BinaryMask& mask);

// Central differences in the interior, one-sided at the borders.
// Throws kInvalidArgument for maps narrower than 2 in either axis.
FloatGrid gradient_magnitude(const NormalizedDepthMap& depth);

// Summed-area tables of a background's depth and gradient magnitude. Built
// once and shared read-only by every placement query on that background.
class PreparedBackground {
 public:
  explicit PreparedBackground(const NormalizedDepthMap& depth);

  int width() const noexcept { return depth_.width(); }
  int height() const noexcept { return depth_.height(); }
  const NormalizedDepthMap& depth() const noexcept { return depth_; }
  const FloatGrid& gradient() const noexcept { return gradient_; }
  const IntegralTable& depth_table() const noexcept { return depth_table_; }
  const IntegralTable& gradient_table() const noexcept { return gradient_table_; }

 private:
  NormalizedDepthMap depth_;
  FloatGrid gradient_;
  IntegralTable depth_table_;
  IntegralTable gradient_table_;
};

// Scores every window on the stride lattice and returns the best one
// (ties: smallest row, then smallest column). Throws kFgTooLarge.
PlacementResult score_windows(const PreparedBackground& background,
                              const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                              const PlacementWeights& weights, int stride);
PlacementResult score_windows(const NormalizedDepthMap& background,
                              const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                              const PlacementWeights& weights, int stride);

// Same scores computed with a direct per-window double loop. Reference path
// for benchmarking the summed-area tables.
PlacementResult score_windows_naive(const NormalizedDepthMap& background,
                                    const ForegroundDepthStats& fg_stats, WindowSize fg_size,
                                    const PlacementWeights& weights, int stride);

// Runs score_windows for every scale at which the resized foreground fits
// (bilinear depth, nearest mask) and returns the best. Earlier scales win
// ties. Throws kNoFeasibleScale.
PlacementResult place_with_scales(const PreparedBackground& background,
                                  const PlacementForeground& foreground,
                                  const PlacementWeights& weights, int stride,
                                  const std::vector<double>& scales);

}  // namespace dcp
