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

#include "dcp/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "dcp/formats.hpp"

namespace dcp {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", field, why));
}

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

template <typename T>
void read_field(const nlohmann::json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(key, e.what());
  }
}

}  // namespace

void validate(const PipelineConfig& c) {
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) bad("lambda", "must lie in [0, 1]");
  if (c.k < 1) bad("k", "must be >= 1");
  if (!(c.tau >= 0.0) || !std::isfinite(c.tau)) bad("tau", "must be finite and >= 0");
  if (c.radius < 1) bad("radius", "must be >= 1");
  try {
    (void)c.weights();
  } catch (const Error& e) {
    bad("alpha/beta/gamma", e.detail());
  }
  if (c.stride < 1) bad("stride", "must be >= 1");
  if (c.scales.empty()) bad("scales", "must be non-empty");
  for (double s : c.scales) {
    if (!(s > 0.0) || !std::isfinite(s)) bad("scales", "every scale must be finite and > 0");
  }
  if (c.feather_radius < 0) bad("feather_radius", "must be >= 0");
  if (!(c.difficult_threshold >= 0.0 && c.difficult_threshold <= 1.0)) {
    bad("difficult_threshold", "must lie in [0, 1]");
  }
  if (c.output_dir.empty()) bad("output_dir", "must be non-empty");
}

PipelineConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) bad("config", "expected a JSON object");
  static const std::set<std::string> known{
      "lambda", "k",       "tau",         "radius",          "alpha",
      "beta",   "gamma",   "stride",      "scales",          "feather_radius",
      "cleanup", "difficult_threshold", "seed", "output_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) bad(key, "unknown config key");
  }
  PipelineConfig c;
  read_field(doc, "lambda", c.lambda);
  read_field(doc, "k", c.k);
  read_field(doc, "tau", c.tau);
  read_field(doc, "radius", c.radius);
  read_field(doc, "alpha", c.alpha);
  read_field(doc, "beta", c.beta);
  read_field(doc, "gamma", c.gamma);
  read_field(doc, "stride", c.stride);
  read_field(doc, "scales", c.scales);
  read_field(doc, "feather_radius", c.feather_radius);
  read_field(doc, "cleanup", c.cleanup);
  read_field(doc, "difficult_threshold", c.difficult_threshold);
  read_field(doc, "seed", c.seed);
  read_field(doc, "output_dir", c.output_dir);
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    bad(path.string(), e.what());
  }
  return config_from_json(doc);
}

nlohmann::json to_json(const PipelineConfig& c) {
  return nlohmann::json{{"lambda", c.lambda},
                        {"k", c.k},
                        {"tau", c.tau},
                        {"radius", c.radius},
                        {"alpha", c.alpha},
                        {"beta", c.beta},
                        {"gamma", c.gamma},
                        {"stride", c.stride},
                        {"scales", c.scales},
                        {"feather_radius", c.feather_radius},
                        {"cleanup", c.cleanup},
                        {"difficult_threshold", c.difficult_threshold},
                        {"seed", c.seed},
                        {"output_dir", c.output_dir}};
}

std::string canonical_config(const PipelineConfig& c) {
  nlohmann::json doc = to_json(c);
  doc.erase("output_dir");
  const PlacementWeights w = c.weights();
  doc["alpha"] = w.alpha();
  doc["beta"] = w.beta();
  doc["gamma"] = w.gamma();
  // nlohmann::json objects iterate in sorted key order.
  return doc.dump();
}

std::string config_hash(const PipelineConfig& c) { return sha256_hex(canonical_config(c)); }

}  // namespace dcp
