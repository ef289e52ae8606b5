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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcp {

enum class ErrorCode {
  kBadMagic,
  kBadVersion,
  kTruncated,
  kNonFinite,
  kEmptyGrid,
  kDimensionMismatch,
  kInvalidMaskValue,
  kIo,
  kPngDecode,
  kZeroVector,
  kInvalidArgument,
  kEmptyMask,
  kEmptyForeground,
  kEmptyPool,
  kFgTooLarge,
  kNoFeasibleScale,
  kOutOfBounds,
  kInsufficientSynthetic,
  kInvalidManifest,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All engine failures are reported through this type. `index` carries the
// element index for payload errors (e.g. the first non-finite float).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  // Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
  std::string detail_;
};

}  // namespace dcp
