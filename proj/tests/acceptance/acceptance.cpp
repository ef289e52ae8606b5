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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "dcp/bench.hpp"
#include "dcp/compositor.hpp"
#include "dcp/extraction.hpp"
#include "dcp/formats.hpp"
#include "dcp/manifest.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/placement.hpp"
#include "dcp/resample.hpp"
#include "dcp/retrieval.hpp"
#include "dcp/synthetic.hpp"
#include "oracles.hpp"

#ifndef DCP_CLI_PATH
#error "DCP_CLI_PATH must name the dcp executable"
#endif

using namespace dcp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int rand_in(SplitRng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(hi - lo + 1)); }

// ---------------------------------------------------------------------------

Outcome placement_oracle() {
  const auto t0 = Clock::now();
  SplitRng rng(0x5eed0001);
  double worst = 0.0;
  int argmax_miss = 0;
  int ties = 0;
  for (int i = 0; i < 50; ++i) {
    const int bw = rand_in(rng, 33, 128), bh = rand_in(rng, 33, 128);
    const WindowSize size{rand_in(rng, 1, 32), rand_in(rng, 1, 32)};
    const bool flat = i % 10 == 9;
    FloatGrid raw = oracle::random_grid(rng, bw, bh);
    ForegroundDepthStats stats{rng.uniform(-1, 1), rng.uniform(0, 1.5)};
    // Every tenth instance is flat with zero foreground stats: all windows
    // tie and the tie-break alone decides the argmax.
    if (flat) {
      raw = FloatGrid(bw, bh, 3.0f);
      stats = {0.0, 0.0};
    }
    const NormalizedDepthMap bg = normalize_depth(DepthMap(raw));
    const PlacementWeights w(rng.uniform(), rng.uniform(), rng.uniform());

    const PlacementResult got = score_windows(bg, stats, size, w, 1);
    const auto want = oracle::score_windows(bg.values(), stats.mean, stats.std, size.h, size.w,
                                            w.alpha(), w.beta(), w.gamma(), 1);
    if (got.score_grid.height() != want.rows || got.score_grid.width() != want.cols) {
      return {false, fmt::format("instance {}: lattice shape differs", i)};
    }
    for (std::size_t k = 0; k < want.scores.size(); ++k) {
      worst = std::max(worst, std::abs(got.score_grid.data()[k] - want.scores[k]));
    }
    argmax_miss += got.x == want.best_x && got.y == want.best_y ? 0 : 1;
    if (flat) ties += got.x == 0 && got.y == 0 && std::abs(got.score - 1.0) <= 1e-12 ? 0 : 1;
  }
  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-5 && argmax_miss == 0 && ties == 0 && secs < 30.0;
  return {pass, fmt::format("50 instances, max |diff| {:.2e} (tol 1e-5), argmax mismatches {}, "
                            "tie-break failures {}, {:.2f} s (limit 30 s)",
                            worst, argmax_miss, ties, secs)};
}

Outcome planted_patch() {
  const auto t0 = Clock::now();
  oracle::TempDir dir("accept_planted");
  int hits = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSpec spec;
    spec.fg_count = 2;
    spec.bg_count = 2;
    spec.planted_patch = true;
    const fs::path out = dir.path() / std::to_string(seed);
    const SyntheticAssets assets = gen_synthetic_assets(seed, spec, out);
    const nlohmann::json truth = read_json(*assets.ground_truth);

    ForegroundRecord fg_rec;
    for (const auto& r : load_foreground_manifest(assets.foreground_manifest)) {
      if (r.id == truth.at("foreground").get<std::string>()) fg_rec = r;
    }
    BackgroundRecord bg_rec;
    for (const auto& r : load_background_manifest(assets.background_manifest)) {
      if (r.id == truth.at("background").get<std::string>()) bg_rec = r;
    }
    const VisibilityParams params{truth.at("tau").get<double>(), truth.at("radius").get<int>()};
    const PreparedForeground fg =
        prepare_foreground(load_foreground(fg_rec), params, truth.at("cleanup").get<bool>());
    const ForegroundDepthStats stats = foreground_depth_stats(fg.placement.depth, fg.placement.mask);
    const NormalizedDepthMap bg = normalize_depth(load_depth(bg_rec.depth));
    const PlacementResult r = score_windows(bg, stats, {fg.mask.height(), fg.mask.width()},
                                            PlacementWeights(0.5, 0.5, 0.0), 1);
    if (r.x == truth.at("x").get<int>() && r.y == truth.at("y").get<int>()) {
      ++hits;
    } else {
      misses += fmt::format(" seed {} got ({}, {}) want ({}, {});", seed, r.x, r.y,
                            truth.at("x").get<int>(), truth.at("y").get<int>());
    }
  }
  const double secs = seconds_since(t0);
  return {hits >= 19 && secs < 10.0,
          fmt::format("{}/20 recovered (need 19), {:.2f} s (limit 10 s){}", hits, secs, misses)};
}

double iou(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Outcome visibility() {
  SplitRng rng(0x5eed0003);
  std::map<int, double> worst{{1, 1.0}, {2, 1.0}, {3, 1.0}};
  for (int radius : {1, 2, 3}) {
    for (int scene = 0; scene < 30; ++scene) {
      const int w = rand_in(rng, 24, 64), h = rand_in(rng, 24, 64);
      const bool vertical = rng.below(2) == 0;
      const int extent = vertical ? w : h;
      const int edge = rand_in(rng, 8, extent - 8);
      const double near = rng.uniform(0.5, 5.0), far = near + rng.uniform(1.0, 10.0);
      const double noise = 0.002 * (far - near);
      FloatGrid depth(w, h);
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          const int t = vertical ? c : r;
          depth(r, c) = static_cast<float>((t < edge ? near : far) + noise * rng.uniform(-1, 1));
        }
      }
      // Segmentation box straddling the step, clear of the image border.
      Grid<std::uint8_t> seg(w, h, 0);
      for (int r = 3; r < h - 3; ++r) {
        for (int c = 3; c < w - 3; ++c) seg(r, c) = 1;
      }
      const BinaryMask seg_mask(seg);
      const BinaryMask vis = visibility_mask(DepthMap(depth), {0.05, radius});

      std::vector<bool> got_occ, want_occ, got_vis, want_vis;
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          if (!seg_mask(r, c)) continue;
          const int t = vertical ? c : r;
          const bool band = t >= edge - radius && t <= edge + radius - 1;
          got_occ.push_back(!vis(r, c));
          want_occ.push_back(band);
          got_vis.push_back(vis(r, c));
          want_vis.push_back(!band);
        }
      }
      worst[radius] = std::min({worst[radius], iou(got_occ, want_occ), iou(got_vis, want_vis)});
    }
  }

  bool constant_ok = true, zero_ok = true;
  for (int i = 0; i < 20; ++i) {
    const int w = rand_in(rng, 1, 40), h = rand_in(rng, 1, 40);
    const DepthMap flat(FloatGrid(w, h, static_cast<float>(rng.uniform(-5, 5))));
    const DepthMap noisy(oracle::random_grid(rng, w, h));
    for (int r = 1; r <= 3; ++r) {
      constant_ok = constant_ok && visibility_mask(flat, {0.05, r}) == BinaryMask::filled(w, h, true);
      zero_ok = zero_ok && visibility_mask(noisy, {0.0, r}) == BinaryMask::filled(w, h, false) &&
                visibility_mask(flat, {0.0, r}) == BinaryMask::filled(w, h, false);
    }
  }
  const bool pass = worst[1] >= 0.95 && worst[2] >= 0.95 && worst[3] >= 0.95 && constant_ok && zero_ok;
  return {pass, fmt::format("min IoU r=1 {:.4f}, r=2 {:.4f}, r=3 {:.4f} (need 0.95) over 30 scenes each; "
                            "constant all-visible {}; tau=0 all-occluded {}",
                            worst[1], worst[2], worst[3], constant_ok ? "yes" : "no",
                            zero_ok ? "yes" : "no")};
}

Outcome normalization() {
  SplitRng rng(0x5eed0004);
  double worst_mean = 0.0, worst_std = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int w = rand_in(rng, 1, 64), h = rand_in(rng, 2, 64);
    const double offset = rng.uniform(-100, 100), spread = std::exp(rng.uniform(-4, 4));
    FloatGrid g(w, h);
    for (auto& v : g.data()) v = static_cast<float>(offset + spread * rng.uniform(-1, 1));
    g.data()[0] = static_cast<float>(offset + 2 * spread);  // never constant
    const NormalizedDepthMap n = normalize_depth(DepthMap(g));
    double sum = 0.0;
    for (float v : n.values().data()) sum += v;
    const double mean = sum / n.values().size();
    double sq = 0.0;
    for (float v : n.values().data()) sq += (v - mean) * (v - mean);
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_std = std::max(worst_std, std::abs(std::sqrt(sq / n.values().size()) - 1.0));
  }
  bool zeros = true;
  for (int i = 0; i < 100; ++i) {
    const NormalizedDepthMap n =
        normalize_depth(DepthMap(FloatGrid(rand_in(rng, 1, 50), rand_in(rng, 1, 50),
                                           static_cast<float>(rng.uniform(-1e4, 1e4)))));
    for (float v : n.values().data()) zeros = zeros && v == 0.0f;
  }
  return {worst_mean <= 1e-6 && worst_std <= 1e-5 && zeros,
          fmt::format("1000 maps: max |mean| {:.2e} (tol 1e-6), max |std-1| {:.2e} (tol 1e-5); "
                      "100 constant maps all zero {}",
                      worst_mean, worst_std, zeros ? "yes" : "no")};
}

Outcome retrieval() {
  SplitRng rng(0x5eed0005);
  int mismatches = 0, self_fail = 0, cases = 0;
  double worst_self = 0.0;
  for (int p = 0; p < 200; ++p) {
    const std::size_t n = 1 + rng.below(1000);
    const std::size_t dim = 1 + rng.below(64);
    std::vector<PoolEntry> pool;
    for (std::size_t i = 0; i < n; ++i) {
      pool.push_back({fmt::format("bg{:05}", rng.below(100000)) + "_" + std::to_string(i),
                      normalize_embedding(oracle::random_embedding(rng, dim))});
    }
    const EmbeddingVec v = normalize_embedding(oracle::random_embedding(rng, dim));
    const EmbeddingVec t = normalize_embedding(oracle::random_embedding(rng, dim));
    const int k = 1 + static_cast<int>(rng.below(std::min<std::size_t>(n, 50) + 5));
    for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
      ++cases;
      const auto got = rank_backgrounds(RetrievalQuery{v, t, lambda, k}, pool);
      const auto want = oracle::rank(v, t, pool, lambda, k);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got[i].background_id == want[i].id && std::abs(got[i].score - want[i].score) <= 1e-12;
      }
      mismatches += same ? 0 : 1;
    }
    const PoolEntry& self = pool[rng.below(n)];
    const auto top = rank_backgrounds(RetrievalQuery{self.embedding, t, 1.0, 1}, pool);
    worst_self = std::max(worst_self, std::abs(top[0].score - 1.0));
    // In low dimensions another entry can carry the identical embedding; the
    // id tie-break then legitimately ranks it first.
    bool self_ok = top[0].background_id == self.id;
    for (const auto& e : pool) {
      if (!self_ok && e.id == top[0].background_id) {
        self_ok = e.id < self.id && std::ranges::equal(e.embedding.values(), self.embedding.values());
      }
    }
    if (!self_ok || std::abs(top[0].score - 1.0) > 1e-6) ++self_fail;
  }
  return {mismatches == 0 && self_fail == 0,
          fmt::format("{} ranking cases, {} differ from full-sort oracle; self-retrieval failures {}/200, "
                      "max |score-1| {:.2e} (tol 1e-6)",
                      cases, mismatches, self_fail, worst_self)};
}

Outcome composite_exactness() {
  SplitRng rng(0x5eed0006);
  int outside_bad = 0, inside_bad = 0, opaque_cases = 0;
  for (int i = 0; i < 100; ++i) {
    const int bw = rand_in(rng, 16, 64), bh = rand_in(rng, 16, 64);
    const int fw = rand_in(rng, 1, 12), fh = rand_in(rng, 1, 12);
    const bool opaque = i % 2 == 0;
    const double scale = opaque ? 1.0 : rng.uniform(0.5, 1.25);
    const int feather = opaque ? 0 : static_cast<int>(rng.below(4));
    ImageBuffer bg(bw, bh, rng.below(2) == 0 ? 3 : 4);
    for (auto& b : bg.data()) b = static_cast<std::uint8_t>(rng.below(256));
    ImageBuffer fg(fw, fh, 4);
    for (auto& b : fg.data()) b = static_cast<std::uint8_t>(rng.below(256));
    const BinaryMask mask = oracle::random_mask(rng, fw, fh, 0.6);
    const int sw = scaled_extent(fw, scale), sh = scaled_extent(fh, scale);
    const int x = rand_in(rng, 0, bh - sh), y = rand_in(rng, 0, bw - sw);
    const ImageBuffer out = paste(bg, fg, mask, x, y, scale, feather);

    // Support: scaled mask dilated by the feather radius (L-inf).
    const BinaryMask scaled = resize_nearest(mask, sw, sh);
    for (int r = 0; r < bh; ++r) {
      for (int c = 0; c < bw; ++c) {
        bool support = false;
        for (int rr = r - x - feather; rr <= r - x + feather && !support; ++rr) {
          for (int cc = c - y - feather; cc <= c - y + feather && !support; ++cc) {
            support = rr >= 0 && cc >= 0 && rr < sh && cc < sw && scaled(rr, cc);
          }
        }
        if (support) continue;
        for (int ch = 0; ch < bg.channels(); ++ch) outside_bad += out(r, c, ch) != bg(r, c, ch);
      }
    }
    if (opaque) {
      ++opaque_cases;
      for (int r = 0; r < fh; ++r) {
        for (int c = 0; c < fw; ++c) {
          if (!mask(r, c)) continue;
          for (int ch = 0; ch < 3; ++ch) inside_bad += out(x + r, y + c, ch) != fg(r, c, ch);
        }
      }
    }
  }
  return {outside_bad == 0 && inside_bad == 0,
          fmt::format("100 cases: {} bytes differ from background outside the support, "
                      "{} masked bytes differ from foreground in {} opaque cases",
                      outside_bad, inside_bad, opaque_cases)};
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::map<std::string, std::vector<std::uint8_t>> outputs(const fs::path& root) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), root).generic_string();
    if (rel == "manifest.json" || rel == "annotations.coco.json" || rel.rfind("images/", 0) == 0) {
      out[rel] = read_file(e.path());
    }
  }
  return out;
}

Outcome determinism() {
  oracle::TempDir dir("accept_determinism");
  const std::string cli = DCP_CLI_PATH;
  const fs::path root = dir.path();
  if (run(fmt::format("\"{}\" gen-synthetic --seed 11 --count 3 --bg-count 4 --dims 64x56 --out \"{}\" > /dev/null",
                      cli, (root / "a").string())) != 0 ||
      run(fmt::format("\"{}\" gen-synthetic --seed 11 --count 3 --bg-count 4 --dims 64x56 --out \"{}\" > /dev/null",
                      cli, (root / "b").string())) != 0) {
    return {false, "gen-synthetic failed"};
  }
  write_json(nlohmann::json{{"k", 3}, {"scales", {0.75, 1.0}}, {"feather_radius", 1}},
             root / "cfg.json");
  std::vector<std::map<std::string, std::vector<std::uint8_t>>> runs;
  int i = 0;
  for (const char* threads : {"1", "8", "1", "8"}) {
    const fs::path assets = root / (i % 2 == 0 ? "a" : "b");
    const fs::path out = root / fmt::format("out{}", i++);
    const int rc = run(fmt::format(
        "DCP_THREADS={} \"{}\" pipeline --config \"{}\" --foregrounds \"{}\" --backgrounds \"{}\" "
        "--output-dir \"{}\" > /dev/null",
        threads, cli, (root / "cfg.json").string(), (assets / "foregrounds.json").string(),
        (assets / "backgrounds.json").string(), out.string()));
    if (rc != 0) return {false, fmt::format("dcp pipeline exited with {}", rc)};
    runs.push_back(outputs(out));
  }
  bool same = true;
  for (const auto& r : runs) same = same && r == runs[0];
  const std::size_t images = runs[0].size() - 2;
  return {same && images == 9,
          fmt::format("4 CLI runs (DCP_THREADS 1, 8, 1, 8; two asset trees from one seed): manifests "
                      "and {} images {}",
                      images, same ? "bit-identical" : "DIFFER")};
}

Outcome performance() {
  const BenchReport r = bench_placement(BenchOptions{});
  return {r.speedup >= 10.0 && r.same_argmax,
          fmt::format("512x512 background, 64x64 window, stride 1: naive {:.3f} s, integral {:.4f} s, "
                      "speedup {:.1f}x (need 10x), argmax ({}, {}) vs ({}, {})",
                      r.naive_seconds, r.integral_seconds, r.speedup, r.naive.x, r.naive.y,
                      r.integral.x, r.integral.y)};
}

Outcome mixing() {
  DatasetManifest real, syn;
  for (int i = 0; i < 80; ++i) real.entries.push_back({fmt::format("real{}.png", i), {}, Origin::kReal, {}});
  for (int i = 0; i < 400; ++i) {
    syn.entries.push_back({fmt::format("syn{}.png", i), {}, Origin::kSynthetic, {}});
  }
  const std::vector<std::pair<double, std::size_t>> expected{
      {0.1, 9}, {0.2, 20}, {0.3, 34}, {0.4, 53}, {0.5, 80}, {0.6, 120}, {0.7, 187}, {0.8, 320}};
  bool pass = true;
  std::string got;
  for (const auto& [ratio, count] : expected) {
    const DatasetManifest m = mix_manifest(real, syn, ratio, 2024);
    std::size_t n_syn = 0, n_real = 0;
    std::set<std::string> unique;
    for (const auto& e : m.entries) {
      (e.origin == Origin::kSynthetic ? n_syn : n_real)++;
      unique.insert(e.image);
    }
    pass = pass && n_syn == count && n_real == 80 && unique.size() == m.entries.size() &&
           synthetic_count_for(ratio, 80) == count;
    got += fmt::format(" {}->{}", ratio, n_syn);
  }
  return {pass, "synthetic counts on 80 real:" + got + " (expected 9 20 34 53 80 120 187 320)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"placement oracle equivalence", placement_oracle},
      {"planted-patch recovery", planted_patch},
      {"visibility correctness", visibility},
      {"normalization contract", normalization},
      {"retrieval oracle", retrieval},
      {"composite exactness", composite_exactness},
      {"determinism", determinism},
      {"performance", performance},
      {"mixing arithmetic", mixing},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
