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

// dcp: command-line front end for the compositing engine.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcp/bench.hpp"
#include "dcp/compositor.hpp"
#include "dcp/config.hpp"
#include "dcp/extraction.hpp"
#include "dcp/formats.hpp"
#include "dcp/manifest.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/placement.hpp"
#include "dcp/retrieval.hpp"
#include "dcp/synthetic.hpp"

namespace {

using namespace dcp;

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("bad scale '{}'", item));
    }
  }
  return out;
}

// "N" or "WxH".
std::pair<int, int> parse_dims(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) {
      const int n = std::stoi(text);
      return {n, n};
    }
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("bad dims '{}', expected N or WxH", text));
  }
}

Rect parse_box(const std::string& text) {
  int v[4];
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &v[0], &v[1], &v[2], &v[3]) != 4) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("bad box '{}', expected x,y,w,h", text));
  }
  return Rect{v[0], v[1], v[2], v[3]};
}

void emit(const nlohmann::json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json(doc, path);
  }
}

Grid<std::uint8_t> heatmap(const DoubleGrid& scores) {
  const auto data = scores.data();
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  Grid<std::uint8_t> out(scores.width(), scores.height(), 0);
  if (*hi > *lo) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      out.data()[i] = static_cast<std::uint8_t>(std::lround(255.0 * (data[i] - *lo) / (*hi - *lo)));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-aware copy-paste compositing engine"};
  app.require_subcommand(1);

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "Rank pool backgrounds for a foreground query");
  std::string r_visual, r_text, r_pool, r_out;
  double r_lambda = kDefaultLambda;
  int r_k = kDefaultTopK;
  retrieve->add_option("--visual", r_visual, "EMB1 image embedding of the foreground")->required();
  retrieve->add_option("--text", r_text, "EMB1 caption embedding of the foreground")->required();
  retrieve->add_option("--pool", r_pool, "background pool manifest (JSON)")->required();
  retrieve->add_option("--lambda", r_lambda, "visual weight in [0,1]");
  retrieve->add_option("--k", r_k, "number of backgrounds to keep");
  retrieve->add_option("--out", r_out, "output JSON (default stdout)");

  // extract
  auto* extract = app.add_subcommand("extract", "Occlusion-aware foreground extraction");
  std::string e_image, e_mask, e_depth, e_out_rgba, e_out_mask;
  VisibilityParams e_params;
  bool e_no_cleanup = false;
  extract->add_option("--image", e_image)->required();
  extract->add_option("--mask", e_mask)->required();
  extract->add_option("--depth", e_depth)->required();
  extract->add_option("--tau", e_params.tau);
  extract->add_option("--radius", e_params.radius);
  extract->add_flag("--no-cleanup", e_no_cleanup, "keep every mask fragment");
  extract->add_option("--out-rgba", e_out_rgba)->required();
  extract->add_option("--out-mask", e_out_mask)->required();

  // place
  auto* place = app.add_subcommand("place", "Depth-guided sliding-window placement");
  std::string p_bg, p_fg, p_mask, p_out, p_heatmap, p_scales = "1.0";
  double p_alpha = 1.0 / 3.0, p_beta = 1.0 / 3.0, p_gamma = 1.0 / 3.0;
  int p_stride = 1;
  place->add_option("--bg-depth", p_bg)->required();
  place->add_option("--fg-depth", p_fg)->required();
  place->add_option("--fg-mask", p_mask)->required();
  place->add_option("--alpha", p_alpha);
  place->add_option("--beta", p_beta);
  place->add_option("--gamma", p_gamma);
  place->add_option("--stride", p_stride);
  place->add_option("--scales", p_scales, "comma-separated scale list");
  place->add_option("--out-json", p_out, "output JSON (default stdout)");
  place->add_option("--heatmap", p_heatmap, "write the score grid as a grayscale PNG");

  // compose
  auto* compose = app.add_subcommand("compose", "Paste a foreground and emit its annotation");
  std::string c_bg, c_rgba, c_mask, c_out, c_box, c_fg_id = "fg", c_ann_out;
  int c_x = 0, c_y = 0, c_feather = 0;
  double c_scale = 1.0, c_difficult = kDefaultDifficultThreshold;
  compose->add_option("--background", c_bg)->required();
  compose->add_option("--fg-rgba", c_rgba)->required();
  compose->add_option("--fg-mask", c_mask)->required();
  compose->add_option("--x", c_x, "row of the paste corner")->required();
  compose->add_option("--y", c_y, "column of the paste corner")->required();
  compose->add_option("--scale", c_scale);
  compose->add_option("--feather", c_feather);
  compose->add_option("--out", c_out)->required();
  compose->add_option("--face-box", c_box, "x,y,w,h in foreground coordinates");
  compose->add_option("--fg-id", c_fg_id);
  compose->add_option("--difficult-threshold", c_difficult);
  compose->add_option("--annotations-out", c_ann_out, "COCO JSON output");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run retrieve/extract/place/compose end to end");
  std::string pl_config, pl_fg, pl_bg, pl_out_dir;
  pipeline->add_option("--config", pl_config)->required();
  pipeline->add_option("--foregrounds", pl_fg)->required();
  pipeline->add_option("--backgrounds", pl_bg)->required();
  pipeline->add_option("--output-dir", pl_out_dir, "overrides output_dir from the config");

  // mix
  auto* mix = app.add_subcommand("mix", "Mix synthetic entries into a real manifest");
  std::string m_real, m_syn, m_out;
  double m_ratio = 0.0;
  std::uint64_t m_seed = 0;
  mix->add_option("--real", m_real)->required();
  mix->add_option("--synthetic", m_syn)->required();
  mix->add_option("--ratio", m_ratio, "synthetic fraction of the final set")->required();
  mix->add_option("--seed", m_seed)->required();
  mix->add_option("--out", m_out, "output JSON (default stdout)");

  // gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic", "Write a deterministic synthetic asset tree");
  std::uint64_t g_seed = 0;
  std::size_t g_count = 1;
  int g_bg_count = -1;
  std::string g_dims = "64", g_fg_dims, g_out = "synthetic";
  bool g_planted = false;
  gen->add_option("--seed", g_seed)->required();
  gen->add_option("--count", g_count, "number of foregrounds (and backgrounds)")->required();
  gen->add_option("--bg-count", g_bg_count, "number of backgrounds (default: --count)");
  gen->add_option("--dims", g_dims, "background dims, N or WxH")->required();
  gen->add_option("--fg-dims", g_fg_dims, "foreground dims, N or WxH");
  gen->add_flag("--planted", g_planted, "plant the first foreground's depth statistics");
  gen->add_option("--out", g_out, "output directory");

  // bench-placement
  auto* bench = app.add_subcommand("bench-placement", "Time integral-table vs naive placement");
  BenchOptions b_opts;
  bool b_check = false;
  bench->add_option("--background", b_opts.background);
  bench->add_option("--window", b_opts.window);
  bench->add_option("--stride", b_opts.stride);
  bench->add_option("--seed", b_opts.seed);
  bench->add_option("--repeats", b_opts.integral_repeats);
  bench->add_flag("--check", b_check, "exit non-zero unless speedup >= 10 and argmax agrees");

  CLI11_PARSE(app, argc, argv);

  try {
    if (retrieve->parsed()) {
      RetrievalQuery query{normalize_embedding(load_embedding(r_visual)),
                           normalize_embedding(load_embedding(r_text)), r_lambda, r_k};
      std::vector<PoolEntry> pool;
      for (const auto& rec : load_background_manifest(r_pool)) {
        pool.push_back(PoolEntry{rec.id, normalize_embedding(load_embedding(rec.embedding))});
      }
      nlohmann::json out = nlohmann::json::array();
      for (const auto& rb : rank_backgrounds(query, pool)) {
        out.push_back({{"id", rb.background_id},
                       {"score", rb.score},
                       {"visual_score", rb.visual_score},
                       {"text_score", rb.text_score}});
      }
      emit(out, r_out);
    } else if (extract->parsed()) {
      ForegroundAsset asset{load_image(e_image), load_mask(e_mask), load_depth(e_depth), Rect{}};
      asset.face_box = Rect{0, 0, asset.image.width(), asset.image.height()};
      const ExtractedForeground fg = extract_foreground(asset, e_params, !e_no_cleanup);
      save_image(fg.rgba, e_out_rgba);
      save_mask(fg.mask, e_out_mask);
      std::cout << nlohmann::json{{"foreground_pixels", fg.mask.count()},
                                  {"segmented_pixels", asset.seg_mask.count()}}
                       .dump()
                << "\n";
    } else if (place->parsed()) {
      const PreparedBackground bg(normalize_depth(load_depth(p_bg)));
      const BinaryMask mask = load_mask(p_mask);
      const NormalizedDepthMap fg_depth = normalize_depth(load_depth(p_fg));
      const PlacementResult result =
          place_with_scales(bg, PlacementForeground{fg_depth, mask},
                            PlacementWeights(p_alpha, p_beta, p_gamma), p_stride, parse_scales(p_scales));
      emit(nlohmann::json{{"x", result.x}, {"y", result.y}, {"scale", result.scale}, {"score", result.score}},
           p_out);
      if (!p_heatmap.empty()) save_gray(heatmap(result.score_grid), p_heatmap);
    } else if (compose->parsed()) {
      const ImageBuffer bg = load_image(c_bg);
      const ImageBuffer rgba = load_image(c_rgba);
      const BinaryMask mask = load_mask(c_mask);
      const ImageBuffer out = paste(bg, rgba, mask, c_x, c_y, c_scale, c_feather);
      save_image(out, c_out);
      if (!c_ann_out.empty()) {
        CocoImage img{c_out, out.width(), out.height(), {}};
        if (!c_box.empty()) {
          if (auto a = transform_annotation(parse_box(c_box), mask, c_x, c_y, c_scale,
                                            CompositeDims{out.width(), out.height()}, c_fg_id,
                                            c_difficult)) {
            img.annotations.push_back(*a);
          }
        }
        write_json(coco_document({img}), c_ann_out);
      }
    } else if (pipeline->parsed()) {
      PipelineConfig config = load_config(pl_config);
      if (!pl_out_dir.empty()) config.output_dir = pl_out_dir;
      const RunResult result = run_pipeline(config, pl_fg, pl_bg);
      std::cout << nlohmann::json{{"composites", result.manifest.entries.size()},
                                  {"skips", result.skips.size()},
                                  {"manifest", result.manifest_path.string()}}
                       .dump()
                << "\n";
    } else if (mix->parsed()) {
      const DatasetManifest mixed =
          mix_manifest(load_dataset_manifest(m_real), load_dataset_manifest(m_syn), m_ratio, m_seed);
      emit(to_json(mixed), m_out);
    } else if (gen->parsed()) {
      SyntheticSpec spec;
      std::tie(spec.width, spec.height) = parse_dims(g_dims);
      if (!g_fg_dims.empty()) std::tie(spec.fg_width, spec.fg_height) = parse_dims(g_fg_dims);
      spec.fg_count = g_count;
      spec.bg_count = g_bg_count >= 0 ? static_cast<std::size_t>(g_bg_count) : g_count;
      spec.planted_patch = g_planted;
      const SyntheticAssets assets = gen_synthetic_assets(g_seed, spec, g_out);
      nlohmann::json out{{"foregrounds", assets.foreground_manifest.string()},
                         {"backgrounds", assets.background_manifest.string()}};
      if (assets.ground_truth) out["ground_truth"] = assets.ground_truth->string();
      std::cout << out.dump() << "\n";
    } else if (bench->parsed()) {
      const BenchReport r = bench_placement(b_opts);
      std::cout << fmt::format(
          "background {0}x{0}, window {1}x{1}, stride {2}\n"
          "naive     {3:10.4f} s  argmax ({4}, {5}) score {6:.6f}\n"
          "integral  {7:10.4f} s  argmax ({8}, {9}) score {10:.6f}\n"
          "speedup   {11:.1f}x  same argmax: {12}  max |score diff| {13:.3g}\n",
          b_opts.background, b_opts.window, b_opts.stride, r.naive_seconds, r.naive.x, r.naive.y,
          r.naive.score, r.integral_seconds, r.integral.x, r.integral.y, r.integral.score,
          r.speedup, r.same_argmax ? "yes" : "no", r.max_abs_score_diff);
      if (b_check && (r.speedup < 10.0 || !r.same_argmax)) return 1;
    }
  } catch (const Error& e) {
    std::cerr << "dcp: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dcp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
