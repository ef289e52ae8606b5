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

#include "dcp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dcp/manifest.hpp"

namespace dcp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchReport bench_placement(const BenchOptions& options) {
  SplitRng rng(options.seed);
  const int n = options.background;
  FloatGrid raw(n, n);
  const double fr = rng.uniform(0.5, 3.0);
  const double fc = rng.uniform(0.5, 3.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      raw(r, c) = static_cast<float>(std::sin(fr * 6.283185307179586 * r / n) +
                                     std::cos(fc * 6.283185307179586 * c / n) +
                                     0.25 * rng.uniform(-1.0, 1.0));
    }
  }
  const NormalizedDepthMap bg = normalize_depth(DepthMap(std::move(raw)));
  const ForegroundDepthStats stats{rng.uniform(-1.0, 1.0), rng.uniform(0.2, 1.0)};
  const PlacementWeights weights(rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0));
  const WindowSize window{options.window, options.window};

  BenchReport report;
  auto start = std::chrono::steady_clock::now();
  report.naive = score_windows_naive(bg, stats, window, weights, options.stride);
  report.naive_seconds = seconds_since(start);

  report.integral_seconds = 1e300;
  for (int i = 0; i < std::max(1, options.integral_repeats); ++i) {
    start = std::chrono::steady_clock::now();
    report.integral = score_windows(bg, stats, window, weights, options.stride);
    report.integral_seconds = std::min(report.integral_seconds, seconds_since(start));
  }
  report.speedup = report.naive_seconds / std::max(report.integral_seconds, 1e-12);
  report.same_argmax = report.naive.x == report.integral.x && report.naive.y == report.integral.y;
  const auto a = report.naive.score_grid.data();
  const auto b = report.integral.score_grid.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    report.max_abs_score_diff = std::max(report.max_abs_score_diff, std::abs(a[i] - b[i]));
  }
  return report;
}

}  // namespace dcp
