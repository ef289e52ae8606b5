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

#include "dcp/formats.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace dcp {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

float get_f32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return std::bit_cast<float>(get_u32(bytes, offset));
}

// Validates magic + version and that at least `header` bytes exist.
void check_header(std::span<const std::uint8_t> bytes, const char (&magic)[5],
                  std::uint8_t version, std::size_t header) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, fmt::format("expected magic \"{}\" at offset 0", magic), 0);
  }
  if (bytes.size() < 5) throw Error(ErrorCode::kTruncated, "file ends before version byte at offset 4", 4);
  if (bytes[4] != version) {
    throw Error(ErrorCode::kBadVersion,
                fmt::format("unsupported version {} at offset 4", static_cast<int>(bytes[4])), 4);
  }
  if (bytes.size() < header) {
    throw Error(ErrorCode::kTruncated,
                fmt::format("header truncated at offset {} (need {} bytes)", bytes.size(), header),
                bytes.size());
  }
}

void check_payload(std::span<const std::uint8_t> bytes, std::size_t header, std::uint64_t count) {
  const std::uint64_t expected = header + 4 * count;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncated,
                fmt::format("payload truncated at offset {} (expected {} bytes)", bytes.size(), expected),
                bytes.size());
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} trailing bytes after payload at offset {}", bytes.size() - expected, expected),
                static_cast<std::size_t>(expected));
  }
}

std::vector<float> read_floats(std::span<const std::uint8_t> bytes, std::size_t header,
                               std::size_t count) {
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = get_f32(bytes, header + 4 * i);
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFinite,
                  fmt::format("non-finite value at index {} (byte offset {})", i, header + 4 * i), i);
    }
  }
  return values;
}

[[noreturn]] void png_fail(const std::filesystem::path& path, const png_image& image) {
  throw Error(ErrorCode::kPngDecode, fmt::format("{}: {}", path.string(), image.message));
}

struct PngPixels {
  int width = 0;
  int height = 0;
  png_uint_32 source_format = 0;
  std::vector<std::uint8_t> data;
};

PngPixels read_png(const std::filesystem::path& path,
                   png_uint_32 (*choose_format)(const std::filesystem::path&, png_uint_32)) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) png_fail(path, image);
  PngPixels out;
  out.source_format = image.format;
  try {
    image.format = choose_format(path, image.format);
  } catch (...) {
    png_image_free(&image);
    throw;
  }
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) png_fail(path, image);
  return out;
}

void write_png(const std::filesystem::path& path, int width, int height, png_uint_32 format,
               const std::uint8_t* data) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::kIo, fmt::format("{}: {}", path.string(), image.message));
  }
  std::vector<std::uint8_t> buffer(size);
  if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::kIo, fmt::format("{}: {}", path.string(), image.message));
  }
  buffer.resize(size);
  write_file(path, buffer);
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, fmt::format("read failed for {}", path.string()));
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot open {} for writing", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write failed for {}", path.string()));
}

std::vector<std::uint8_t> encode_depth(const DepthMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(13 + 4 * map.values().size());
  out.insert(out.end(), {'D', 'M', 'A', 'P', kDmapVersion});
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  for (float v : map.values().data()) put_f32(out, v);
  return out;
}

DepthMap decode_depth(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 13;
  check_header(bytes, "DMAP", kDmapVersion, kHeader);
  const std::uint32_t width = get_u32(bytes, 5);
  const std::uint32_t height = get_u32(bytes, 9);
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kEmptyGrid, fmt::format("zero dimension {}x{} at offset 5", width, height), 5);
  }
  if (width > std::numeric_limits<int>::max() || height > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "depth dimensions exceed supported range", 5);
  }
  const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
  check_payload(bytes, kHeader, count);
  return DepthMap(FloatGrid(static_cast<int>(width), static_cast<int>(height),
                            read_floats(bytes, kHeader, static_cast<std::size_t>(count))));
}

DepthMap load_depth(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_depth(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()), e.index());
  }
}

void save_depth(const DepthMap& map, const std::filesystem::path& path) {
  write_file(path, encode_depth(map));
}

std::vector<std::uint8_t> encode_embedding(const EmbeddingVec& vec) {
  std::vector<std::uint8_t> out;
  out.reserve(9 + 4 * vec.dim());
  out.insert(out.end(), {'E', 'M', 'B', '1', kEmbVersion});
  put_u32(out, static_cast<std::uint32_t>(vec.dim()));
  for (float v : vec.values()) put_f32(out, v);
  return out;
}

EmbeddingVec decode_embedding(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 9;
  check_header(bytes, "EMB1", kEmbVersion, kHeader);
  const std::uint32_t dim = get_u32(bytes, 5);
  if (dim == 0) throw Error(ErrorCode::kEmptyGrid, "zero embedding dimension at offset 5", 5);
  check_payload(bytes, kHeader, dim);
  return EmbeddingVec(read_floats(bytes, kHeader, dim));
}

EmbeddingVec load_embedding(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_embedding(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()), e.index());
  }
}

void save_embedding(const EmbeddingVec& vec, const std::filesystem::path& path) {
  write_file(path, encode_embedding(vec));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const PngPixels px = read_png(path, [](const std::filesystem::path& p, png_uint_32 format) {
    if (format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
      throw Error(ErrorCode::kPngDecode, fmt::format("{}: mask must be 8-bit single-channel", p.string()));
    }
    return static_cast<png_uint_32>(PNG_FORMAT_GRAY);
  });
  Grid<std::uint8_t> values(px.width, px.height);
  auto out = values.data();
  for (std::size_t i = 0; i < px.data.size(); ++i) {
    const std::uint8_t v = px.data[i];
    if (v != 0 && v != 255) {
      throw Error(ErrorCode::kInvalidMaskValue,
                  fmt::format("{}: mask value {} at index {} (expected 0 or 255)", path.string(), v, i), i);
    }
    out[i] = v == 255 ? 1 : 0;
  }
  return BinaryMask(std::move(values));
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  Grid<std::uint8_t> gray(mask.width(), mask.height());
  const auto in = mask.values().data();
  auto out = gray.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] ? 255 : 0;
  save_gray(gray, path);
}

ImageBuffer load_image(const std::filesystem::path& path) {
  PngPixels px = read_png(path, [](const std::filesystem::path& p, png_uint_32 format) {
    if (format & PNG_FORMAT_FLAG_LINEAR) {
      throw Error(ErrorCode::kPngDecode, fmt::format("{}: only 8-bit images are supported", p.string()));
    }
    return static_cast<png_uint_32>((format & PNG_FORMAT_FLAG_ALPHA) ? PNG_FORMAT_RGBA
                                                                     : PNG_FORMAT_RGB);
  });
  const int channels = (px.source_format & PNG_FORMAT_FLAG_ALPHA) ? 4 : 3;
  return ImageBuffer(px.width, px.height, channels, std::move(px.data));
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  write_png(path, image.width(), image.height(),
            image.has_alpha() ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB, image.data().data());
}

void save_gray(const Grid<std::uint8_t>& gray, const std::filesystem::path& path) {
  write_png(path, gray.width(), gray.height(), PNG_FORMAT_GRAY, gray.data().data());
}

}  // namespace dcp
