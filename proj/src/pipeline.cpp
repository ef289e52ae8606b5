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

#include "dcp/pipeline.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>

#include <fmt/format.h>

#include "dcp/formats.hpp"
#include "dcp/mask_ops.hpp"
#include "dcp/parallel.hpp"
#include "dcp/retrieval.hpp"

namespace dcp {

namespace fs = std::filesystem;

namespace {

Rect intersect(const Rect& a, const Rect& b) {
  const int r0 = std::max(a.x, b.x);
  const int c0 = std::max(a.y, b.y);
  const int r1 = std::min(a.x + a.h, b.x + b.h);
  const int c1 = std::min(a.y + a.w, b.y + b.w);
  if (r1 <= r0 || c1 <= c0) return Rect{};
  return Rect{r0, c0, c1 - c0, r1 - r0};
}

void require_exists(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw Error(ErrorCode::kIo, fmt::format("missing asset {}", p.string()));
}

struct ForegroundWork {
  std::optional<PreparedForeground> prepared;
  std::vector<RankedBackground> ranking;
  std::optional<SkipRecord> skip;
};

struct ItemOutcome {
  std::optional<CompositeSample> sample;
  std::optional<DatasetEntry> entry;
  std::optional<CocoImage> coco;
  std::optional<SkipRecord> skip;
  std::optional<Error> fatal;
};

nlohmann::json skip_json(const SkipRecord& s) {
  nlohmann::json j{{"event", "skip"}, {"foreground", s.foreground_id}, {"code", s.code},
                   {"reason", s.reason}};
  if (!s.background_id.empty()) j["background"] = s.background_id;
  return j;
}

}  // namespace

PreparedForeground prepare_foreground(const ForegroundAsset& asset,
                                      const VisibilityParams& params, bool cleanup) {
  ExtractedForeground extracted = extract_foreground(asset, params, cleanup);
  const Rect box = bounding_box(extracted.mask);
  const NormalizedDepthMap depth = normalize_depth(asset.depth);
  PreparedForeground out{
      crop(extracted.rgba, box),
      crop(extracted.mask, box),
      PlacementForeground{NormalizedDepthMap(crop(depth.values(), box)), crop(extracted.mask, box)},
      box,
      Rect{},
      asset.face_box.area()};
  const Rect face = intersect(asset.face_box, box);
  if (!face.empty()) out.face_box = Rect{face.x - box.x, face.y - box.y, face.w, face.h};
  return out;
}

std::optional<Annotation> annotate(const PreparedForeground& fg, int x, int y, double scale,
                                   CompositeDims dims, const std::string& foreground_id,
                                   double difficult_threshold) {
  if (fg.face_box.empty() || fg.face_area <= 0) return std::nullopt;
  std::optional<Annotation> a =
      transform_annotation(fg.face_box, fg.mask, x, y, scale, dims, foreground_id, difficult_threshold);
  if (!a) return a;
  a->visible_fraction *= static_cast<double>(fg.face_box.area()) / static_cast<double>(fg.face_area);
  a->difficult = a->visible_fraction < difficult_threshold;
  return a;
}

ForegroundAsset load_foreground(const ForegroundRecord& record) {
  ForegroundAsset asset{load_image(record.image), load_mask(record.mask), load_depth(record.depth),
                        record.face_box};
  validate(asset);
  return asset;
}

std::string composite_file_name(const std::string& bg_id, const std::string& fg_id, int x, int y,
                                double scale) {
  return fmt::format("{}__{}__{}_{}_{}.png", bg_id, fg_id, x, y, scale);
}

RunResult run_pipeline(const PipelineConfig& config, const fs::path& foregrounds,
                       const fs::path& backgrounds, const RunOptions& options) {
  validate(config);
  const unsigned threads = options.threads > 0 ? options.threads : thread_count_from_env();
  const std::vector<ForegroundRecord> fg_records = load_foreground_manifest(foregrounds);
  const std::vector<BackgroundRecord> bg_records = load_background_manifest(backgrounds);
  if (bg_records.empty()) throw Error(ErrorCode::kEmptyPool, "background manifest is empty");
  for (const auto& r : fg_records) {
    for (const auto* p : {&r.image, &r.mask, &r.depth, &r.visual_embedding, &r.text_embedding}) {
      require_exists(*p);
    }
  }
  for (const auto& r : bg_records) {
    for (const auto* p : {&r.embedding, &r.image, &r.depth}) require_exists(*p);
  }

  std::vector<PoolEntry> pool;
  std::map<std::string, const BackgroundRecord*> bg_by_id;
  for (const auto& r : bg_records) {
    EmbeddingVec e = normalize_embedding(load_embedding(r.embedding));
    if (r.dim && *r.dim != e.dim()) {
      throw Error(ErrorCode::kInvalidManifest,
                  fmt::format("{}: manifest dim {} but embedding has {}", r.embedding.string(), *r.dim, e.dim()));
    }
    pool.push_back(PoolEntry{r.id, std::move(e)});
    bg_by_id[r.id] = &r;
  }

  const std::string hash = config_hash(config);
  const VisibilityParams visibility = config.visibility();
  const PlacementWeights weights = config.weights();

  // Stage 1: per-foreground retrieval and extraction. Load or extraction
  // failures skip the foreground.
  std::vector<ForegroundWork> fg_work(fg_records.size());
  parallel_for(fg_records.size(), threads, [&](std::size_t i) {
    const ForegroundRecord& rec = fg_records[i];
    ForegroundWork& work = fg_work[i];
    try {
      const ForegroundAsset asset = load_foreground(rec);
      RetrievalQuery query{normalize_embedding(load_embedding(rec.visual_embedding)),
                           normalize_embedding(load_embedding(rec.text_embedding)), config.lambda,
                           config.k};
      work.ranking = rank_backgrounds(query, pool);
      work.prepared = prepare_foreground(asset, visibility, config.cleanup);
    } catch (const Error& e) {
      work.skip = SkipRecord{rec.id, "", std::string(to_string(e.code())), e.detail()};
      work.ranking.clear();
    }
  });

  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "images");

  // Stage 2: one work item per (foreground, retained background).
  struct Item {
    std::size_t fg;
    std::size_t rank;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < fg_records.size(); ++i) {
    for (std::size_t r = 0; r < fg_work[i].ranking.size(); ++r) items.push_back(Item{i, r});
  }
  std::vector<ItemOutcome> outcomes(items.size());
  parallel_for(items.size(), threads, [&](std::size_t n) {
    const Item item = items[n];
    const ForegroundRecord& fg_rec = fg_records[item.fg];
    const PreparedForeground& fg = *fg_work[item.fg].prepared;
    const RankedBackground& ranked = fg_work[item.fg].ranking[item.rank];
    const BackgroundRecord& bg_rec = *bg_by_id.at(ranked.background_id);
    ItemOutcome& out = outcomes[n];

    std::optional<ImageBuffer> bg_image;
    std::optional<PreparedBackground> bg;
    try {
      const DepthMap bg_depth = load_depth(bg_rec.depth);
      bg_image = load_image(bg_rec.image);
      require_same_shape(*bg_image, bg_depth,
                         fmt::format("{}: background image and depth dimensions differ",
                                     bg_rec.id).c_str());
      bg.emplace(normalize_depth(bg_depth));
    } catch (const Error& e) {
      out.fatal = e;
      return;
    }

    try {
      PlacementResult placement =
          place_with_scales(*bg, fg.placement, weights, config.stride, config.scales);
      ImageBuffer composite = paste(*bg_image, fg.rgba, fg.mask, placement.x, placement.y,
                                    placement.scale, config.feather_radius);
      const std::string name =
          composite_file_name(bg_rec.id, fg_rec.id, placement.x, placement.y, placement.scale);
      save_image(composite, out_dir / "images" / name);

      const CompositeDims dims{composite.width(), composite.height()};
      std::vector<Annotation> annotations;
      if (auto a = annotate(fg, placement.x, placement.y, placement.scale, dims, fg_rec.id,
                            config.difficult_threshold)) {
        annotations.push_back(std::move(*a));
      }

      const nlohmann::json provenance{{"foreground_id", fg_rec.id},
                                      {"background_id", bg_rec.id},
                                      {"rank", item.rank},
                                      {"retrieval_score", ranked.score},
                                      {"x", placement.x},
                                      {"y", placement.y},
                                      {"scale", placement.scale},
                                      {"placement_score", placement.score},
                                      {"config_hash", hash}};
      out.entry = DatasetEntry{"images/" + name, annotations, Origin::kSynthetic, provenance};
      out.coco = CocoImage{"images/" + name, dims.width, dims.height, annotations};
      CompositeSample sample;
      if (options.retain_images) sample.image = std::move(composite);
      sample.annotations = std::move(annotations);
      sample.provenance = Provenance{fg_rec.id, bg_rec.id, std::move(placement), hash};
      out.sample = std::move(sample);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoFeasibleScale && e.code() != ErrorCode::kFgTooLarge) throw;
      out.skip = SkipRecord{fg_rec.id, bg_rec.id, std::string(to_string(e.code())), e.detail()};
    }
  });
  for (const auto& o : outcomes) {
    if (o.fatal) throw *o.fatal;
  }

  // Stage 3: serial assembly in (foreground id, rank) order.
  std::vector<std::size_t> fg_order(fg_records.size());
  for (std::size_t i = 0; i < fg_order.size(); ++i) fg_order[i] = i;
  std::sort(fg_order.begin(), fg_order.end(),
            [&](std::size_t a, std::size_t b) { return fg_records[a].id < fg_records[b].id; });
  std::vector<std::vector<std::size_t>> items_by_fg(fg_records.size());
  for (std::size_t n = 0; n < items.size(); ++n) items_by_fg[items[n].fg].push_back(n);

  RunResult result;
  result.manifest.mix_ratio = 1.0;
  std::vector<CocoImage> coco;
  std::vector<nlohmann::json> run_log;
  run_log.push_back({{"event", "start"},
                     {"config_hash", hash},
                     {"foregrounds", fg_records.size()},
                     {"backgrounds", bg_records.size()}});
  for (std::size_t i : fg_order) {
    if (fg_work[i].skip) {
      result.skips.push_back(*fg_work[i].skip);
      run_log.push_back(skip_json(*fg_work[i].skip));
    }
    for (std::size_t n : items_by_fg[i]) {
      ItemOutcome& o = outcomes[n];
      if (o.skip) {
        result.skips.push_back(*o.skip);
        run_log.push_back(skip_json(*o.skip));
        continue;
      }
      run_log.push_back({{"event", "composite"}, {"image", o.entry->image},
                         {"provenance", *o.entry->provenance}});
      result.manifest.entries.push_back(std::move(*o.entry));
      coco.push_back(std::move(*o.coco));
      result.samples.push_back(std::move(*o.sample));
    }
  }
  for (const auto& s : result.skips) result.manifest.log.push_back(skip_json(s));
  run_log.push_back({{"event", "done"},
                     {"composites", result.manifest.entries.size()},
                     {"skips", result.skips.size()}});

  result.manifest_path = out_dir / "manifest.json";
  save_dataset_manifest(result.manifest, result.manifest_path);
  write_json(coco_document(coco), out_dir / "annotations.coco.json");
  std::string log_text;
  for (const auto& line : run_log) log_text += line.dump() + "\n";
  write_file(out_dir / "run.log.jsonl",
             std::span(reinterpret_cast<const std::uint8_t*>(log_text.data()), log_text.size()));
  return result;
}

}  // namespace dcp
