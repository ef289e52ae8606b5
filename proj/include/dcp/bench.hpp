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

#include <cstdint>

#include "dcp/placement.hpp"

namespace dcp {

struct BenchOptions {
  int background = 512;  // square extent
  int window = 64;
  int stride = 1;
  std::uint64_t seed = 7;
  int integral_repeats = 5;
};

struct BenchReport {
  double naive_seconds = 0.0;
  double integral_seconds = 0.0;  // best of integral_repeats, table build included
  double speedup = 0.0;
  PlacementResult naive;
  PlacementResult integral;
  bool same_argmax = false;
  double max_abs_score_diff = 0.0;
};

// Times score_windows against score_windows_naive on a seeded random
// background and foreground statistics.
BenchReport bench_placement(const BenchOptions& options);

}  // namespace dcp
