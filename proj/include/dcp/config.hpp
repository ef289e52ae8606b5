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
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcp/extraction.hpp"
#include "dcp/placement.hpp"

namespace dcp {

struct PipelineConfig {
  double lambda = 0.5;
  int k = 5;
  double tau = 0.05;
  int radius = 2;
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double gamma = 1.0 / 3.0;
  int stride = 1;
  std::vector<double> scales{1.0};
  int feather_radius = 0;
  bool cleanup = true;
  double difficult_threshold = 0.2;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  VisibilityParams visibility() const { return VisibilityParams{tau, radius}; }
  PlacementWeights weights() const { return PlacementWeights(alpha, beta, gamma); }
};

// Throws kInvalidConfig naming the first offending field.
void validate(const PipelineConfig& config);

// Missing keys take their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

// Sorted-key JSON of the effective generation parameters: weights are
// renormalized and output_dir is excluded.
std::string canonical_config(const PipelineConfig& config);
// Lower-case hex SHA-256 of canonical_config().
std::string config_hash(const PipelineConfig& config);

}  // namespace dcp
