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

#include "dcp/embedding.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dcp/error.hpp"

namespace dcp {

EmbeddingVec::EmbeddingVec(std::vector<float> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kEmptyGrid, "embedding dimension must be positive");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFinite, fmt::format("embedding component {} is not finite", i), i);
    }
  }
}

double EmbeddingVec::norm() const {
  double sq = 0.0;
  for (float v : values_) sq += static_cast<double>(v) * v;
  return std::sqrt(sq);
}

}  // namespace dcp
