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

#include "dcp/error.hpp"

#include <fmt/format.h>

namespace dcp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidMaskValue: return "InvalidMaskValue";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kPngDecode: return "PngDecode";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kEmptyForeground: return "EmptyForeground";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kFgTooLarge: return "FgTooLarge";
    case ErrorCode::kNoFeasibleScale: return "NoFeasibleScale";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kInsufficientSynthetic: return "InsufficientSynthetic";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)),
      code_(code),
      index_(index),
      detail_(message) {}

}  // namespace dcp
