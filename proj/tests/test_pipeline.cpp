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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <map>
#include <set>

#include "dcp/formats.hpp"
#include "dcp/parallel.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/synthetic.hpp"
#include "oracles.hpp"

using namespace dcp;
namespace fs = std::filesystem;

namespace {

using Tree = std::map<std::string, std::vector<std::uint8_t>>;

Tree read_tree(const fs::path& root) {
  Tree out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return out;
}

SyntheticAssets make_assets(const fs::path& dir, std::size_t fgs, std::size_t bgs, std::uint64_t seed = 1) {
  SyntheticSpec spec;
  spec.fg_count = fgs;
  spec.bg_count = bgs;
  spec.width = 48;
  spec.height = 40;
  return gen_synthetic_assets(seed, spec, dir);
}

PipelineConfig config_for(const fs::path& out, int k) {
  PipelineConfig c;
  c.k = k;
  c.output_dir = out.string();
  return c;
}

DatasetManifest entries(std::size_t n, Origin origin, const std::string& prefix) {
  DatasetManifest m;
  for (std::size_t i = 0; i < n; ++i) m.entries.push_back({prefix + std::to_string(i) + ".png", {}, origin, {}});
  return m;
}

}  // namespace

TEST_CASE("config defaults, parsing and validation") {
  const PipelineConfig d = config_from_json(nlohmann::json::object());
  CHECK(d.lambda == 0.5);
  CHECK(d.k == 5);
  CHECK(d.tau == 0.05);
  CHECK(d.radius == 2);
  CHECK(d.stride == 1);
  CHECK(d.scales == std::vector<double>{1.0});
  CHECK(d.feather_radius == 0);
  CHECK(d.cleanup);
  CHECK(d.difficult_threshold == 0.2);

  const PipelineConfig c = config_from_json({{"k", 2}, {"scales", {0.5, 1.0}}, {"seed", 9}});
  CHECK(c.k == 2);
  CHECK(c.scales == std::vector<double>{0.5, 1.0});
  CHECK(c.seed == 9);
  CHECK(config_from_json(to_json(c)).k == 2);

  auto code = [](const nlohmann::json& j) {
    try {
      config_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code({{"lamda", 0.5}}) == ErrorCode::kInvalidConfig);
  CHECK(code({{"lambda", 1.5}}) == ErrorCode::kInvalidConfig);
  CHECK(code({{"k", 0}}) == ErrorCode::kInvalidConfig);
  CHECK(code({{"k", "five"}}) == ErrorCode::kInvalidConfig);
  CHECK(code({{"alpha", 0}, {"beta", 0}, {"gamma", 0}}) == ErrorCode::kInvalidConfig);
  CHECK(code({{"scales", nlohmann::json::array()}}) == ErrorCode::kInvalidConfig);
  CHECK(code(nlohmann::json::array()) == ErrorCode::kInvalidConfig);
}

TEST_CASE("config hash tracks effective parameters only") {
  const char* a = R"({"lambda":0.25,"k":3,"tau":0.1,"alpha":1,"beta":2,"gamma":1,"output_dir":"x"})";
  const char* b = R"({"output_dir":"y","gamma":1,"beta":2,"alpha":1,"tau":0.1,"k":3,"lambda":0.25})";
  const std::string ha = config_hash(config_from_json(nlohmann::json::parse(a)));
  CHECK(ha.size() == 64);
  CHECK(ha == config_hash(config_from_json(nlohmann::json::parse(b))));
  // Weights are compared after renormalization.
  CHECK(ha == config_hash(config_from_json(nlohmann::json::parse(
                  R"({"lambda":0.25,"k":3,"tau":0.1,"alpha":2,"beta":4,"gamma":2})"))));

  const PipelineConfig base;
  const std::string h0 = config_hash(base);
  std::set<std::string> seen{h0};
  auto differs = [&](auto mutate) {
    PipelineConfig c;
    mutate(c);
    return seen.insert(config_hash(c)).second;
  };
  CHECK(differs([](PipelineConfig& c) { c.lambda = 0.6; }));
  CHECK(differs([](PipelineConfig& c) { c.k = 6; }));
  CHECK(differs([](PipelineConfig& c) { c.tau = 0.06; }));
  CHECK(differs([](PipelineConfig& c) { c.radius = 3; }));
  CHECK(differs([](PipelineConfig& c) { c.alpha = 0.5; }));
  CHECK(differs([](PipelineConfig& c) { c.gamma = 0.0; }));
  CHECK(differs([](PipelineConfig& c) { c.stride = 2; }));
  CHECK(differs([](PipelineConfig& c) { c.scales = {1.0, 0.5}; }));
  CHECK(differs([](PipelineConfig& c) { c.feather_radius = 1; }));
  CHECK(differs([](PipelineConfig& c) { c.cleanup = false; }));
  CHECK(differs([](PipelineConfig& c) { c.difficult_threshold = 0.3; }));
  CHECK(differs([](PipelineConfig& c) { c.seed = 1; }));
  CHECK_FALSE(differs([](PipelineConfig& c) { c.output_dir = "elsewhere"; }));
}

TEST_CASE("manifest loaders") {
  oracle::TempDir dir("manifest");
  const auto assets = make_assets(dir.path(), 2, 3);
  const auto bgs = load_background_manifest(assets.background_manifest);
  const auto fgs = load_foreground_manifest(assets.foreground_manifest);
  REQUIRE(bgs.size() == 3);
  REQUIRE(fgs.size() == 2);
  CHECK(bgs[0].id == "bg000");
  CHECK(fs::exists(bgs[2].depth));
  CHECK(fs::exists(fgs[1].text_embedding));
  CHECK(load_embedding(bgs[0].embedding).dim() == 16);
  CHECK(std::abs(load_embedding(bgs[0].embedding).norm() - 1.0) <= 1e-5);

  auto expect_invalid = [&](const std::string& text) {
    const auto p = dir.path() / "bad.json";
    const std::vector<std::uint8_t> bytes(text.begin(), text.end());
    write_file(p, bytes);
    try {
      load_background_manifest(p);
      FAIL("expected InvalidManifest for " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidManifest);
    }
  };
  expect_invalid("{");
  expect_invalid("{}");
  expect_invalid(R"([{"id":"a","embedding":"e","image":"i"}])");
  expect_invalid(R"([{"id":"a","embedding":"e","image":"i","depth":"d"},{"id":"a","embedding":"e","image":"i","depth":"d"}])");

  save_background_manifest(bgs, dir.path() / "copy" / "bg.json");
  const auto again = load_background_manifest(dir.path() / "copy" / "bg.json");
  for (std::size_t i = 0; i < bgs.size(); ++i) {
    CHECK(fs::equivalent(again[i].depth, bgs[i].depth));
    CHECK(again[i].id == bgs[i].id);
  }
}

TEST_CASE("dataset manifest json round trip") {
  DatasetManifest m;
  m.mix_ratio = 0.25;
  Annotation a;
  a.box = Rect{1, 2, 3, 4};
  a.source_foreground_id = "fg7";
  a.visible_fraction = 0.5;
  m.entries.push_back({"a.png", {a}, Origin::kSynthetic, nlohmann::json{{"x", 1}}});
  m.entries.push_back({"b.png", {}, Origin::kReal, std::nullopt});
  m.log.push_back({{"event", "skip"}});
  CHECK(dataset_manifest_from_json(to_json(m)) == m);
  CHECK(to_json(m)["entries"][0]["origin"] == "synthetic");
}

TEST_CASE("pipeline cardinalities") {
  SUBCASE("1 fg, 1 bg, K=1") {
    oracle::TempDir dir("card1");
    const auto assets = make_assets(dir.path() / "assets", 1, 1);
    const RunResult r = run_pipeline(config_for(dir.path() / "out", 1), assets.foreground_manifest,
                                     assets.background_manifest);
    REQUIRE(r.manifest.entries.size() == 1);
    CHECK(r.samples.size() == 1);
    CHECK(r.skips.empty());
    const auto& e = r.manifest.entries[0];
    CHECK(e.origin == Origin::kSynthetic);
    CHECK(fs::exists(dir.path() / "out" / e.image));
    CHECK(e.provenance->at("foreground_id") == "fg000");
    CHECK(e.provenance->at("background_id") == "bg000");
    CHECK(e.provenance->at("config_hash") == config_hash(config_for(dir.path() / "out", 1)));
    CHECK(load_dataset_manifest(r.manifest_path) == r.manifest);
    const auto coco = read_json(dir.path() / "out" / "annotations.coco.json");
    CHECK(coco["images"].size() == 1);
    CHECK(fs::exists(dir.path() / "out" / "run.log.jsonl"));
    const auto& p = r.samples[0].provenance.placement;
    CHECK(e.image == "images/" + composite_file_name("bg000", "fg000", p.x, p.y, p.scale));
  }
  SUBCASE("2 fgs, 3 bgs, K=2") {
    oracle::TempDir dir("card4");
    const auto assets = make_assets(dir.path() / "assets", 2, 3);
    const RunResult r = run_pipeline(config_for(dir.path() / "out", 2), assets.foreground_manifest,
                                     assets.background_manifest);
    CHECK(r.manifest.entries.size() == 4);
    CHECK(read_tree(dir.path() / "out").size() == 4 + 3);
    // Ordered by foreground id, then rank.
    CHECK(r.manifest.entries[0].provenance->at("foreground_id") == "fg000");
    CHECK(r.manifest.entries[1].provenance->at("rank") == 1);
    CHECK(r.manifest.entries[2].provenance->at("foreground_id") == "fg001");
  }
  SUBCASE("K larger than the pool") {
    oracle::TempDir dir("cardk");
    const auto assets = make_assets(dir.path() / "assets", 2, 2);
    const RunResult r = run_pipeline(config_for(dir.path() / "out", 5), assets.foreground_manifest,
                                     assets.background_manifest);
    CHECK(r.manifest.entries.size() == 4);
  }
}

TEST_CASE("empty foreground is skipped and logged, others untouched") {
  oracle::TempDir dir("skip");
  const auto assets = make_assets(dir.path() / "assets", 3, 2);
  const RunResult clean = run_pipeline(config_for(dir.path() / "clean", 2), assets.foreground_manifest,
                                       assets.background_manifest);
  const auto fgs = load_foreground_manifest(assets.foreground_manifest);
  const BinaryMask m = load_mask(fgs[1].mask);
  save_mask(BinaryMask::filled(m.width(), m.height(), false), fgs[1].mask);

  const RunResult r = run_pipeline(config_for(dir.path() / "dirty", 2), assets.foreground_manifest,
                                   assets.background_manifest);
  REQUIRE(r.skips.size() == 1);
  CHECK(r.skips[0].foreground_id == "fg001");
  CHECK(r.skips[0].code == "EmptyForeground");
  REQUIRE(r.manifest.log.size() == 1);
  CHECK(r.manifest.log[0]["foreground"] == "fg001");
  CHECK(r.manifest.entries.size() == 4);

  std::vector<DatasetEntry> kept;
  for (const auto& e : clean.manifest.entries) {
    if (e.provenance->at("foreground_id") != "fg001") kept.push_back(e);
  }
  CHECK(kept == r.manifest.entries);
  for (const auto& e : kept) {
    CHECK(read_file(dir.path() / "clean" / e.image) == read_file(dir.path() / "dirty" / e.image));
  }
}

TEST_CASE("missing assets fail fast with the path") {
  oracle::TempDir dir("missing");
  const auto assets = make_assets(dir.path() / "assets", 1, 2);
  const auto bgs = load_background_manifest(assets.background_manifest);
  fs::remove(bgs[1].depth);
  try {
    run_pipeline(config_for(dir.path() / "out", 1), assets.foreground_manifest, assets.background_manifest);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find(bgs[1].depth.filename().string()) != std::string::npos);
  }
}

TEST_CASE("embedding dim recorded in the pool is enforced") {
  oracle::TempDir dir("dim");
  const auto assets = make_assets(dir.path() / "assets", 1, 1);
  auto bgs = load_background_manifest(assets.background_manifest);
  bgs[0].dim = 8;
  save_background_manifest(bgs, assets.background_manifest);
  CHECK_THROWS_AS(run_pipeline(config_for(dir.path() / "out", 1), assets.foreground_manifest,
                               assets.background_manifest),
                  Error);
}

TEST_CASE("pipeline output does not depend on the thread count") {
  oracle::TempDir dir("threads");
  const auto assets = make_assets(dir.path() / "assets", 4, 3, 77);
  PipelineConfig c = config_for(dir.path() / "one", 2);
  c.scales = {0.75, 1.0};
  c.feather_radius = 1;
  RunOptions serial;
  serial.threads = 1;
  run_pipeline(c, assets.foreground_manifest, assets.background_manifest, serial);
  c.output_dir = (dir.path() / "many").string();
  RunOptions wide;
  wide.threads = 6;
  run_pipeline(c, assets.foreground_manifest, assets.background_manifest, wide);
  const Tree a = read_tree(dir.path() / "one"), b = read_tree(dir.path() / "many");
  CHECK(a.size() == 8 + 3);
  CHECK(a == b);
}

TEST_CASE("mix_manifest") {
  const DatasetManifest real = entries(80, Origin::kReal, "real");
  const DatasetManifest syn = entries(400, Origin::kSynthetic, "syn");

  CHECK(mix_manifest(real, syn, 0.0, 1).entries == real.entries);

  const DatasetManifest m = mix_manifest(real, syn, 0.2, 5);
  REQUIRE(m.entries.size() == 100);
  CHECK(m.mix_ratio == 0.2);
  for (std::size_t i = 0; i < 80; ++i) CHECK(m.entries[i] == real.entries[i]);
  std::set<std::string> names;
  for (std::size_t i = 80; i < 100; ++i) {
    CHECK(m.entries[i].origin == Origin::kSynthetic);
    names.insert(m.entries[i].image);
  }
  CHECK(names.size() == 20);

  CHECK(mix_manifest(real, syn, 0.2, 5) == m);
  CHECK(mix_manifest(real, syn, 0.2, 6) != m);

  for (double ratio = 0.05; ratio < 0.81; ratio += 0.05) {
    const DatasetManifest r = mix_manifest(real, syn, ratio, 3);
    const double realized = static_cast<double>(r.entries.size() - 80) / r.entries.size();
    CHECK(std::abs(realized - ratio) <= 1.0 / r.entries.size());
  }

  auto code = [&](double ratio, const DatasetManifest& re, const DatasetManifest& sy) {
    try {
      mix_manifest(re, sy, ratio, 0);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code(0.9, real, syn) == ErrorCode::kInsufficientSynthetic);
  CHECK(code(1.0, real, syn) == ErrorCode::kInvalidArgument);
  CHECK(code(-0.1, real, syn) == ErrorCode::kInvalidArgument);
  CHECK(code(0.2, DatasetManifest{}, syn) == ErrorCode::kInvalidArgument);
  CHECK(synthetic_count_for(0.2, 80) == 20);
  CHECK(synthetic_count_for(0.7, 80) == 187);
}

TEST_CASE("synthetic assets are deterministic") {
  oracle::TempDir dir("gen");
  SyntheticSpec spec;
  spec.fg_count = 3;
  spec.bg_count = 2;
  spec.planted_patch = true;
  gen_synthetic_assets(42, spec, dir.path() / "a");
  gen_synthetic_assets(42, spec, dir.path() / "b");
  gen_synthetic_assets(43, spec, dir.path() / "c");
  const Tree a = read_tree(dir.path() / "a");
  CHECK(a == read_tree(dir.path() / "b"));
  CHECK(a != read_tree(dir.path() / "c"));
  CHECK(a.size() == 3 * 5 + 2 * 3 + 3);

  for (const auto& r : load_foreground_manifest(dir.path() / "a" / "foregrounds.json")) {
    const ImageBuffer img = load_image(r.image);
    CHECK(load_mask(r.mask).width() == img.width());
    CHECK(load_depth(r.depth).height() == img.height());
    CHECK(std::abs(load_embedding(r.visual_embedding).norm() - 1.0) <= 1e-5);
  }
  const PlantedTruth truth = load_ground_truth(dir.path() / "a" / "ground_truth.json");
  CHECK(truth.foreground_id == "fg000");
  CHECK(truth.background_id == "bg000");
}

TEST_CASE("count=0 writes empty manifests and no assets") {
  oracle::TempDir dir("gen0");
  SyntheticSpec spec;
  spec.fg_count = 0;
  spec.bg_count = 0;
  const SyntheticAssets s = gen_synthetic_assets(1, spec, dir.path());
  CHECK(load_foreground_manifest(s.foreground_manifest).empty());
  CHECK(load_background_manifest(s.background_manifest).empty());
  CHECK(read_tree(dir.path()).size() == 2);
  CHECK_FALSE(s.ground_truth);
  SyntheticSpec tiny;
  tiny.width = 7;
  CHECK_THROWS_AS(gen_synthetic_assets(1, tiny, dir.path() / "t"), Error);
}

TEST_CASE("parallel_for") {
  for (unsigned threads : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(50, 4, [](std::size_t i) {
                    if (i == 17) throw Error(ErrorCode::kIo, "boom");
                  }),
                  Error);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });

  setenv("DCP_THREADS", "3", 1);
  CHECK(thread_count_from_env() == 3);
  setenv("DCP_THREADS", "0", 1);
  CHECK(thread_count_from_env() >= 1);
  setenv("DCP_THREADS", "many", 1);
  CHECK_THROWS_AS(thread_count_from_env(), Error);
  unsetenv("DCP_THREADS");
  CHECK(thread_count_from_env() >= 1);
}

TEST_CASE("composite file name") {
  CHECK(composite_file_name("bg1", "fg2", 3, 4, 1.0) == "bg1__fg2__3_4_1.png");
  CHECK(composite_file_name("bg1", "fg2", 0, 12, 0.5) == "bg1__fg2__0_12_0.5.png");
}
