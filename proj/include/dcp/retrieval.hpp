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

#include <string>
#include <vector>

#include "dcp/embedding.hpp"

namespace dcp {

inline constexpr double kDefaultLambda = 0.5;
inline constexpr int kDefaultTopK = 5;

struct RetrievalQuery {
  EmbeddingVec visual;  // image embedding of the foreground
  EmbeddingVec text;    // text embedding of the foreground caption
  double lambda = kDefaultLambda;
  int k = kDefaultTopK;
};

struct PoolEntry {
  std::string id;
  EmbeddingVec embedding;
};

struct RankedBackground {
  std::string background_id;
  double score = 0.0;         // lambda * visual + (1 - lambda) * text
  double visual_score = 0.0;  // <visual, b>
  double text_score = 0.0;    // <text, b>
};

// v / ||v||_2. Throws kZeroVector.
EmbeddingVec normalize_embedding(const EmbeddingVec& v);

// Dot product accumulated in double. Throws kDimensionMismatch.
double similarity(const EmbeddingVec& a, const EmbeddingVec& b);

double fused_score(double visual, double text, double lambda);

// Orders by descending score, then ascending id, and keeps the first k.
std::vector<RankedBackground> select_top_k(std::vector<RankedBackground> scored, int k);

// Scores every pool entry against the query and returns the top
// min(k, |pool|). Embeddings are expected to be L2-normalized already.
std::vector<RankedBackground> rank_backgrounds(const RetrievalQuery& query,
                                               const std::vector<PoolEntry>& pool);

}  // namespace dcp
