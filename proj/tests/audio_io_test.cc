// f0warp/tests/audio_io_test.cc

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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include "doctest.h"
#include "f0warp/audio_io.h"
#include "support/oracles.h"

using namespace f0warp;

namespace {

void put16(std::string& s, std::uint16_t v) {
  s.push_back(char(v & 0xFF));
  s.push_back(char(v >> 8));
}
void put32(std::string& s, std::uint32_t v) {
  put16(s, v & 0xFFFF);
  put16(s, v >> 16);
}

// Hand-assembled RIFF file, independent of encode_wav.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                      std::uint16_t bits, const std::string& data) {
  std::string fmt;
  put16(fmt, format);
  put16(fmt, channels);
  put32(fmt, rate);
  put32(fmt, rate * channels * bits / 8);
  put16(fmt, channels * bits / 8);
  put16(fmt, bits);
  std::string s = "RIFF";
  put32(s, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + data.size()));
  s += "WAVEfmt ";
  put32(s, static_cast<std::uint32_t>(fmt.size()));
  s += fmt;
  s += "data";
  put32(s, static_cast<std::uint32_t>(data.size()));
  s += data;
  return s;
}

std::string pcm(std::initializer_list<std::int16_t> v) {
  std::string d;
  for (std::int16_t x : v) put16(d, static_cast<std::uint16_t>(x));
  return d;
}

ErrorCode code_of(const std::string& bytes) {
  try {
    parse_wav(bytes, "x");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("parse_wav scales 16-bit PCM by 1/32768") {
  const AudioBuffer b = parse_wav(wav_bytes(1, 1, 16000, 16, pcm({0, 16384, -32768, 32767})), "u1");
  REQUIRE(b.samples.size() == 4);
  CHECK(b.samples[0] == 0.0f);
  CHECK(b.samples[1] == 0.5f);
  CHECK(b.samples[2] == -1.0f);
  CHECK(b.samples[3] == doctest::Approx(32767.0 / 32768.0));
  CHECK(b.sample_rate == 16000);
  CHECK(b.source_id == "u1");
}

TEST_CASE("parse_wav rejects unsupported streams with typed errors") {
  CHECK(code_of(wav_bytes(3, 1, 16000, 32, std::string(8, '\0'))) == ErrorCode::kUnsupportedFormat);
  CHECK(code_of(wav_bytes(1, 1, 16000, 8, std::string(4, '\0'))) == ErrorCode::kUnsupportedFormat);
  CHECK(code_of(wav_bytes(1, 2, 16000, 16, pcm({1, 2}))) == ErrorCode::kChannelMismatch);
  CHECK(code_of(wav_bytes(1, 1, 8000, 16, pcm({1, 2}))) == ErrorCode::kRateMismatch);
  CHECK(code_of(std::string("RIFF\x04\0\0\0WAVE", 12)) == ErrorCode::kCorruptFile);
  CHECK(code_of("not a wav file at all") == ErrorCode::kCorruptFile);

  std::string truncated = wav_bytes(1, 1, 16000, 16, pcm({1, 2, 3, 4}));
  truncated.resize(truncated.size() - 3);
  CHECK(code_of(truncated) == ErrorCode::kCorruptFile);
}

TEST_CASE("read_wav reports a missing file as an I/O error") {
  try {
    read_wav("/nonexistent/f0warp/missing.wav");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIoError);
  }
}

TEST_CASE("write_wav then read_wav round-trips quantized samples") {
  AudioBuffer b;
  b.sample_rate = 16000;
  for (int i = 0; i < 1000; ++i) b.samples.push_back(static_cast<float>(std::sin(0.01 * i) * 0.7));
  b.samples.push_back(1.5f);  // clipped
  const auto dir = oracle::temp_dir("wav");
  write_wav(dir / "a.wav", b);
  const AudioBuffer r = read_wav(dir / "a.wav");
  REQUIRE(r.samples.size() == b.samples.size());
  for (std::size_t i = 0; i + 1 < b.samples.size(); ++i)
    CHECK(std::abs(r.samples[i] - b.samples[i]) <= 0.5f / 32768.0f + 1e-7f);
  CHECK(r.samples.back() == doctest::Approx(32767.0 / 32768.0));
  CHECK(r.source_id == "a");
  CHECK(encode_wav(r) == encode_wav(read_wav(dir / "a.wav")));
}

TEST_CASE("too_short uses the analysis window") {
  AudioBuffer b;
  b.samples.assign(399, 0.0f);
  CHECK(b.too_short());
  b.samples.push_back(0.0f);
  CHECK_FALSE(b.too_short());
  CHECK(b.duration() == doctest::Approx(0.025));
}
