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
#include <span>
#include <vector>

#include "dcp/embedding.hpp"
#include "dcp/grid.hpp"

namespace dcp {

// DMAP, little-endian: "DMAP", u8 version (1), u32 width, u32 height, then
// width*height float32 row-major. 13 + 4wh bytes.
inline constexpr std::uint8_t kDmapVersion = 1;
// EMB1, little-endian: "EMB1", u8 version (1), u32 dim, then dim float32.
inline constexpr std::uint8_t kEmbVersion = 1;

std::vector<std::uint8_t> encode_depth(const DepthMap& map);
DepthMap decode_depth(std::span<const std::uint8_t> bytes);
DepthMap load_depth(const std::filesystem::path& path);
void save_depth(const DepthMap& map, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_embedding(const EmbeddingVec& vec);
EmbeddingVec decode_embedding(std::span<const std::uint8_t> bytes);
EmbeddingVec load_embedding(const std::filesystem::path& path);
void save_embedding(const EmbeddingVec& vec, const std::filesystem::path& path);

// Masks are 8-bit single-channel PNGs holding 0 or 255 only.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

// 8-bit RGB or RGBA PNG. Grayscale files are expanded to RGB on load.
ImageBuffer load_image(const std::filesystem::path& path);
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

// 8-bit grayscale PNG of an arbitrary byte grid.
void save_gray(const Grid<std::uint8_t>& gray, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dcp
