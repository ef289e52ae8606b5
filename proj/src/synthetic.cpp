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

#include "dcp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dcp/formats.hpp"
#include "dcp/manifest.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/retrieval.hpp"

namespace dcp {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Independent stream per (kind, index) so growing a tree never perturbs the
// assets already in it.
SplitRng stream(std::uint64_t seed, std::uint64_t kind, std::uint64_t index) {
  SplitRng mix(seed ^ (kind * 0xd1b54a32d192ed03ULL) ^ (index * 0x8cb92ba72f3d8dd7ULL));
  return SplitRng(mix.next());
}

double gaussian(SplitRng& rng) {
  const double u1 = std::max(rng.uniform(), 1e-300);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

struct CosineTerm {
  double amplitude;
  double freq_row;  // cycles per image height
  double freq_col;  // cycles per image width
  double phase;
};

DoubleGrid cosine_field(SplitRng& rng, int width, int height, double base, double amp_lo,
                        double amp_hi, double max_freq) {
  CosineTerm terms[3];
  for (auto& t : terms) {
    t.amplitude = rng.uniform(amp_lo, amp_hi);
    t.freq_row = rng.uniform(-max_freq, max_freq);
    t.freq_col = rng.uniform(-max_freq, max_freq);
    t.phase = rng.uniform(0.0, kTwoPi);
  }
  DoubleGrid out(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double v = base;
      for (const auto& t : terms) {
        v += t.amplitude *
             std::cos(kTwoPi * (t.freq_row * r / height + t.freq_col * c / width) + t.phase);
      }
      out(r, c) = v;
    }
  }
  return out;
}

DepthMap to_depth(const DoubleGrid& field) {
  FloatGrid g(field.width(), field.height());
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = static_cast<float>(field.data()[i]);
  return DepthMap(std::move(g));
}

ImageBuffer random_image(SplitRng& rng, int width, int height) {
  const double tint[3] = {rng.uniform(40, 200), rng.uniform(40, 200), rng.uniform(40, 200)};
  const double slope[3] = {rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(-60, 60)};
  ImageBuffer img(width, height, 3);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const double v = tint[ch] + slope[ch] * (static_cast<double>(r) / height - 0.5) +
                         rng.uniform(-12.0, 12.0);
        img(r, c, ch) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return img;
}

EmbeddingVec random_unit(SplitRng& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(gaussian(rng));
  return normalize_embedding(EmbeddingVec(std::move(v)));
}

EmbeddingVec perturbed_unit(SplitRng& rng, const EmbeddingVec& anchor, double noise) {
  std::vector<float> v(anchor.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<float>(anchor[i] + noise * gaussian(rng) / std::sqrt(double(v.size())));
  }
  return normalize_embedding(EmbeddingVec(std::move(v)));
}

// Rewrites the window so that, after the whole map is z-scored, the window
// has the requested mean and population std. Fixed-point iteration on the
// map statistics, which the window itself shifts.
void plant_statistics(DoubleGrid& field, const Rect& window, const DoubleGrid& pattern,
                      const ForegroundDepthStats& target) {
  const double n = static_cast<double>(window.area());
  double pm = 0.0;
  for (double v : pattern.data()) pm += v;
  pm /= n;
  double pv = 0.0;
  for (double v : pattern.data()) pv += (v - pm) * (v - pm);
  const double ps = std::sqrt(pv / n);

  const double total = static_cast<double>(field.size());
  double prev_mu = 0.0, prev_sigma = 0.0;
  for (int iter = 0; iter < 1000; ++iter) {
    double sum = 0.0;
    for (double v : field.data()) sum += v;
    const double mu = sum / total;
    double sq = 0.0;
    for (double v : field.data()) sq += (v - mu) * (v - mu);
    const double sigma = std::sqrt(sq / total);
    for (int r = 0; r < window.h; ++r) {
      for (int c = 0; c < window.w; ++c) {
        const double z = ps > 0.0 ? (pattern(r, c) - pm) / ps : 0.0;
        field(window.x + r, window.y + c) = mu + sigma * (target.mean + target.std * z);
      }
    }
    if (iter > 0 && std::abs(mu - prev_mu) < 1e-13 && std::abs(sigma - prev_sigma) < 1e-13) return;
    prev_mu = mu;
    prev_sigma = sigma;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "planted statistics did not converge; the foreground is too large for the background");
}

struct GeneratedForeground {
  ForegroundRecord record;
  ForegroundAsset asset;
};

}  // namespace

SyntheticAssets gen_synthetic_assets(std::uint64_t seed, const SyntheticSpec& spec,
                                     const fs::path& out_dir) {
  if (spec.width < 8 || spec.height < 8) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic dims must be at least 8x8");
  }
  if (spec.embedding_dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding_dim must be > 0");
  const int fg_w = spec.fg_width > 0 ? spec.fg_width : std::min(spec.width, std::max(8, spec.width / 4));
  const int fg_h = spec.fg_height > 0 ? spec.fg_height : std::min(spec.height, std::max(8, spec.height / 4));
  if (fg_w > spec.width || fg_h > spec.height) {
    throw Error(ErrorCode::kInvalidArgument, "foreground extent exceeds the background");
  }
  if (spec.planted_patch && (spec.fg_count == 0 || spec.bg_count == 0)) {
    throw Error(ErrorCode::kInvalidArgument, "a planted patch needs a foreground and a background");
  }

  fs::create_directories(out_dir);
  SyntheticAssets result;
  result.foreground_manifest = out_dir / "foregrounds.json";
  result.background_manifest = out_dir / "backgrounds.json";
  if (spec.fg_count > 0) fs::create_directories(out_dir / "fg");
  if (spec.bg_count > 0) fs::create_directories(out_dir / "bg");

  // Background embeddings first: foreground queries are drawn near them.
  std::vector<EmbeddingVec> bg_embeddings;
  for (std::size_t i = 0; i < spec.bg_count; ++i) {
    SplitRng rng = stream(seed, 1, i);
    bg_embeddings.push_back(random_unit(rng, spec.embedding_dim));
  }

  std::vector<GeneratedForeground> fgs;
  for (std::size_t i = 0; i < spec.fg_count; ++i) {
    SplitRng rng = stream(seed, 2, i);
    const std::string id = fmt::format("fg{:03d}", i);
    const DoubleGrid field = cosine_field(rng, fg_w, fg_h, 3.0, 0.05, 0.2, 0.6);
    ImageBuffer image = random_image(rng, fg_w, fg_h);
    // Person silhouette: a box inset from the image border.
    const Rect body{fg_h / 8, fg_w / 4, fg_w - 2 * (fg_w / 4), fg_h - fg_h / 8 - fg_h / 16};
    Grid<std::uint8_t> seg(fg_w, fg_h, 0);
    for (int r = body.x; r < body.x + body.h; ++r) {
      for (int c = body.y; c < body.y + body.w; ++c) seg(r, c) = 1;
    }
    const Rect face{body.x, body.y + body.w / 4, std::max(1, body.w / 2), std::max(1, body.h / 3)};

    EmbeddingVec visual = bg_embeddings.empty()
                              ? random_unit(rng, spec.embedding_dim)
                              : perturbed_unit(rng, bg_embeddings[i % bg_embeddings.size()], 0.5);
    EmbeddingVec text = bg_embeddings.empty()
                            ? random_unit(rng, spec.embedding_dim)
                            : perturbed_unit(rng, bg_embeddings[i % bg_embeddings.size()], 0.8);

    GeneratedForeground g{
        ForegroundRecord{id, out_dir / "fg" / (id + "_image.png"), out_dir / "fg" / (id + "_mask.png"),
                         out_dir / "fg" / (id + "_depth.dmap"), out_dir / "fg" / (id + "_visual.emb"),
                         out_dir / "fg" / (id + "_text.emb"), face},
        ForegroundAsset{std::move(image), BinaryMask(std::move(seg)), to_depth(field), face}};
    save_image(g.asset.image, g.record.image);
    save_mask(g.asset.seg_mask, g.record.mask);
    save_depth(g.asset.depth, g.record.depth);
    save_embedding(visual, g.record.visual_embedding);
    save_embedding(text, g.record.text_embedding);
    fgs.push_back(std::move(g));
  }

  std::vector<BackgroundRecord> bgs;
  for (std::size_t i = 0; i < spec.bg_count; ++i) {
    SplitRng rng = stream(seed, 3, i);
    const std::string id = fmt::format("bg{:03d}", i);
    DoubleGrid field = cosine_field(rng, spec.width, spec.height, 5.0, 0.3, 1.0, 1.5);
    const ImageBuffer image = random_image(rng, spec.width, spec.height);

    if (spec.planted_patch && i == 0) {
      const PreparedForeground prep =
          prepare_foreground(fgs.front().asset, spec.visibility, spec.cleanup);
      PlantedTruth truth;
      truth.foreground_id = fgs.front().record.id;
      truth.background_id = id;
      truth.window = WindowSize{prep.crop.h, prep.crop.w};
      truth.fg_stats = foreground_depth_stats(prep.placement.depth, prep.placement.mask);
      SplitRng where = stream(seed, 4, 0);
      truth.x = static_cast<int>(where.below(static_cast<std::uint64_t>(spec.height - truth.window.h + 1)));
      truth.y = static_cast<int>(where.below(static_cast<std::uint64_t>(spec.width - truth.window.w + 1)));
      DoubleGrid pattern(truth.window.w, truth.window.h);
      for (int r = 0; r < truth.window.h; ++r) {
        for (int c = 0; c < truth.window.w; ++c) pattern(r, c) = prep.placement.depth(r, c);
      }
      plant_statistics(field, Rect{truth.x, truth.y, truth.window.w, truth.window.h}, pattern,
                       truth.fg_stats);
      result.planted = truth;
    }

    BackgroundRecord rec{id, out_dir / "bg" / (id + "_embedding.emb"),
                         out_dir / "bg" / (id + "_image.png"), out_dir / "bg" / (id + "_depth.dmap"),
                         spec.embedding_dim};
    save_embedding(bg_embeddings[i], rec.embedding);
    save_image(image, rec.image);
    save_depth(to_depth(field), rec.depth);
    bgs.push_back(std::move(rec));
  }

  std::vector<ForegroundRecord> fg_records;
  for (const auto& g : fgs) fg_records.push_back(g.record);
  save_foreground_manifest(fg_records, result.foreground_manifest);
  save_background_manifest(bgs, result.background_manifest);

  if (result.planted) {
    const PlantedTruth& t = *result.planted;
    result.ground_truth = out_dir / "ground_truth.json";
    write_json(nlohmann::json{{"foreground", t.foreground_id},
                              {"background", t.background_id},
                              {"x", t.x},
                              {"y", t.y},
                              {"window", {t.window.h, t.window.w}},
                              {"fg_mean", t.fg_stats.mean},
                              {"fg_std", t.fg_stats.std},
                              {"tau", spec.visibility.tau},
                              {"radius", spec.visibility.radius},
                              {"cleanup", spec.cleanup}},
               *result.ground_truth);
  }
  return result;
}

PlantedTruth load_ground_truth(const fs::path& path) {
  const nlohmann::json doc = read_json(path);
  try {
    PlantedTruth t;
    t.foreground_id = doc.at("foreground").get<std::string>();
    t.background_id = doc.at("background").get<std::string>();
    t.x = doc.at("x").get<int>();
    t.y = doc.at("y").get<int>();
    t.window = WindowSize{doc.at("window").at(0).get<int>(), doc.at("window").at(1).get<int>()};
    t.fg_stats = ForegroundDepthStats{doc.at("fg_mean").get<double>(), doc.at("fg_std").get<double>()};
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidManifest, fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace dcp
