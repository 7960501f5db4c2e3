// f0warp/audio_io.cc

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

#include "f0warp/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

namespace f0warp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t load_u32(std::string_view bytes, std::size_t pos) {
  auto b = [&](std::size_t i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i]));
  };
  return b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
}

std::uint16_t load_u16(std::string_view bytes, std::size_t pos) {
  auto b = [&](std::size_t i) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[pos + i]));
  };
  return static_cast<std::uint16_t>(b(0) | (b(1) << 8));
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void store_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

[[noreturn]] void corrupt(const std::string& id, const std::string& why) {
  throw Error(ErrorCode::kCorruptFile, "corrupt WAV '" + id + "': " + why);
}

struct FmtChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

void check_fmt(const FmtChunk& fmt, const std::string& id) {
  if (fmt.format_tag != kFormatPcm)
    throw Error(ErrorCode::kUnsupportedFormat,
                "WAV '" + id + "' is not linear PCM (format tag " +
                    std::to_string(fmt.format_tag) + ")");
  if (fmt.bits_per_sample != 16)
    throw Error(ErrorCode::kUnsupportedFormat,
                "WAV '" + id + "' has " + std::to_string(fmt.bits_per_sample) +
                    "-bit samples; only 16-bit is supported");
  if (fmt.channels != 1)
    throw Error(ErrorCode::kChannelMismatch,
                "WAV '" + id + "' has " + std::to_string(fmt.channels) +
                    " channels; expected mono");
  if (fmt.sample_rate != static_cast<std::uint32_t>(kSampleRate))
    throw Error(ErrorCode::kRateMismatch,
                "WAV '" + id + "' is sampled at " +
                    std::to_string(fmt.sample_rate) + " Hz; expected " +
                    std::to_string(kSampleRate) + " Hz");
}

}  // namespace

AudioBuffer parse_wav(std::string_view bytes, std::string source_id) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE")
    corrupt(source_id, "missing RIFF/WAVE header");

  std::optional<FmtChunk> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view tag = bytes.substr(pos, 4);
    const std::uint32_t size = load_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) corrupt(source_id, "truncated chunk");

    if (tag == "fmt ") {
      if (size < 16) corrupt(source_id, "fmt chunk too small");
      FmtChunk f;
      f.format_tag = load_u16(bytes, body);
      f.channels = load_u16(bytes, body + 2);
      f.sample_rate = load_u32(bytes, body + 4);
      f.bits_per_sample = load_u16(bytes, body + 14);
      if (f.format_tag == kFormatExtensible && size >= 40) {
        // First two bytes of the sub-format GUID carry the real tag.
        f.format_tag = load_u16(bytes, body + 24);
      }
      fmt = f;
    } else if (tag == "data") {
      if (!fmt) corrupt(source_id, "data chunk before fmt chunk");
      check_fmt(*fmt, source_id);
      if (size % 2 != 0) corrupt(source_id, "odd byte count in 16-bit data");
      AudioBuffer buffer;
      buffer.sample_rate = kSampleRate;
      buffer.source_id = std::move(source_id);
      buffer.samples.resize(size / 2);
      for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(load_u16(bytes, body + 2 * i));
        buffer.samples[i] = static_cast<float>(raw) / 32768.0f;
      }
      return buffer;
    }
    pos = body + size + (size & 1u);  // chunks are word aligned
  }
  if (!fmt) corrupt(source_id, "no fmt chunk");
  check_fmt(*fmt, source_id);
  corrupt(source_id, "no data chunk");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_wav(ss.str(), path.stem().string());
}

std::string encode_wav(const AudioBuffer& buffer) {
  if (buffer.sample_rate != kSampleRate)
    throw Error(ErrorCode::kRateMismatch, "refusing to write non-16 kHz audio");
  const auto data_bytes = static_cast<std::uint32_t>(buffer.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  store_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  store_u32(out, 16);
  store_u16(out, kFormatPcm);
  store_u16(out, 1);
  store_u32(out, kSampleRate);
  store_u32(out, kSampleRate * 2);
  store_u16(out, 2);
  store_u16(out, 16);
  out += "data";
  store_u32(out, data_bytes);
  for (float s : buffer.samples) {
    if (!std::isfinite(s))
      throw Error(ErrorCode::kDomainError, "non-finite sample in buffer");
    const double q = std::clamp(std::nearbyint(static_cast<double>(s) * 32768.0),
                                -32768.0, 32767.0);
    store_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer) {
  const std::string bytes = encode_wav(buffer);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace f0warp
