// f0warp/common.cc

// Copyright 2026 The f0warp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "f0warp/common.h"

#include <array>
#include <charconv>

namespace f0warp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyFilter: return "EmptyFilter";
    case ErrorCode::kDuplicateShift: return "DuplicateShift";
    case ErrorCode::kMissingZeroShift: return "MissingZeroShift";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::string format_number(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace f0warp
