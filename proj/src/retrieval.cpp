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

#include "dcp/retrieval.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "dcp/error.hpp"

namespace dcp {

EmbeddingVec normalize_embedding(const EmbeddingVec& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorCode::kZeroVector, "cannot normalize a zero embedding");
  std::vector<float> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = static_cast<float>(v[i] / n);
  return EmbeddingVec(std::move(out));
}

double similarity(const EmbeddingVec& a, const EmbeddingVec& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("embedding dims differ ({} vs {})", a.dim(), b.dim()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += static_cast<double>(a[i]) * b[i];
  return dot;
}

double fused_score(double visual, double text, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("lambda {} outside [0, 1]", lambda));
  }
  return lambda * visual + (1.0 - lambda) * text;
}

std::vector<RankedBackground> select_top_k(std::vector<RankedBackground> scored, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, fmt::format("k must be >= 1, got {}", k));
  const auto keep = std::min(scored.size(), static_cast<std::size_t>(k));
  const auto before = [](const RankedBackground& a, const RankedBackground& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.background_id < b.background_id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), before);
  scored.resize(keep);
  return scored;
}

std::vector<RankedBackground> rank_backgrounds(const RetrievalQuery& query,
                                               const std::vector<PoolEntry>& pool) {
  if (pool.empty()) throw Error(ErrorCode::kEmptyPool, "background pool is empty");
  if (query.visual.dim() != query.text.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "visual and text query embeddings differ in dim");
  }
  std::unordered_set<std::string_view> seen;
  std::vector<RankedBackground> scored;
  scored.reserve(pool.size());
  for (const PoolEntry& entry : pool) {
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("duplicate background id '{}'", entry.id));
    }
    RankedBackground rb;
    rb.background_id = entry.id;
    rb.visual_score = similarity(query.visual, entry.embedding);
    rb.text_score = similarity(query.text, entry.embedding);
    rb.score = fused_score(rb.visual_score, rb.text_score, query.lambda);
    scored.push_back(std::move(rb));
  }
  return select_top_k(std::move(scored), query.k);
}

}  // namespace dcp
