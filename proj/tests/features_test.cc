// f0warp/tests/features_test.cc

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
#include <numeric>
#include <random>

#include "doctest.h"
#include "f0warp/features.h"
#include "f0warp/mel.h"
#include "f0warp/synth.h"
#include "support/oracles.h"

using namespace f0warp;

namespace {

AudioBuffer noise(std::size_t n, unsigned seed) {
  AudioBuffer b;
  b.sample_rate = kSampleRate;
  std::mt19937 rng(seed);
  std::normal_distribution<float> g(0.0f, 0.1f);
  for (std::size_t i = 0; i < n; ++i) b.samples.push_back(g(rng));
  return b;
}

}  // namespace

TEST_CASE("frame count: 1 s at 25/10 ms gives 98 frames of 13") {
  CHECK(num_frames(16000, FeatureConfig{}) == 98);
  CHECK(num_frames(400, FeatureConfig{}) == 1);
  CHECK(num_frames(559, FeatureConfig{}) == 1);
  CHECK(num_frames(560, FeatureConfig{}) == 2);
  CHECK(num_frames(399, FeatureConfig{}) == 0);
  const FeatureMatrix m = extract_features(noise(16000, 1), FeatureConfig{});
  CHECK(m.frames() == 98);
  CHECK(m.dims() == 13);
}

TEST_CASE("input shorter than one window raises TooShort") {
  try {
    extract_features(noise(399, 1), FeatureConfig{});
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooShort);
  }
}

TEST_CASE("power_spectrum agrees with direct DFT summation and Parseval") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  std::vector<double> x(400);
  for (double& v : x) v = g(rng);
  const auto p = power_spectrum(x, 512);
  const auto ref = oracle::naive_power(x, 512);
  REQUIRE(p.size() == 257);
  for (std::size_t k = 0; k < p.size(); ++k)
    CHECK(p[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(1.0));

  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;
  double freq_energy = p[0] + p[256];
  for (int k = 1; k < 256; ++k) freq_energy += 2.0 * p[k];
  CHECK(freq_energy / 512.0 == doctest::Approx(time_energy).epsilon(1e-10));
}

TEST_CASE("dct_ii is orthonormal and inverse_dct_ii undoes it") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x(23);
  for (double& v : x) v = u(rng);
  const auto c = dct_ii(x, 23);
  const auto ref = oracle::naive_dct(x, 23);
  for (int k = 0; k < 23; ++k) CHECK(c[k] == doctest::Approx(ref[k]).epsilon(1e-12).scale(1.0));
  const auto back = inverse_dct_ii(c);
  for (int i = 0; i < 23; ++i) CHECK(std::abs(back[i] - x[i]) < 1e-10);
  CHECK(std::inner_product(c.begin(), c.end(), c.begin(), 0.0) ==
        doctest::Approx(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)));
}

TEST_CASE("hamming window endpoints and symmetry") {
  const auto w = hamming_window(400);
  CHECK(w.front() == doctest::Approx(0.08));
  CHECK(w.back() == doctest::Approx(0.08));
  for (int i = 0; i < 200; ++i) CHECK(w[i] == doctest::Approx(w[399 - i]));
}

TEST_CASE("features match the slow reference front end") {
  const AudioBuffer audio = synth_vowel(VowelSpec{});
  SUBCASE("baseline mfcc") {
    const FeatureMatrix m = extract_features(audio, FeatureConfig{});
    const auto ref = oracle::reference_features(audio.samples, {}, 0.0);
    REQUIRE(ref.size() == m.frames());
    for (std::size_t t = 0; t < ref.size(); t += 7)
      for (std::size_t d = 0; d < 13; ++d)
        CHECK(m.values(t, d) == doctest::Approx(ref[t][d]).epsilon(1e-4).scale(1.0));
  }
  SUBCASE("warped log-mel at 6.2 kHz") {
    FeatureConfig cfg = with_bandwidth_policy(FeatureConfig{}, true);
    cfg.kind = FeatureKind::kLogMel;
    const WarpSpec w = compute_warp(230.0, 100.0);
    const FeatureMatrix m = extract_features(audio, cfg, w);
    oracle::FrontEnd fe;
    fe.hi = 6200.0;
    fe.mfcc = false;
    const auto ref = oracle::reference_features(audio.samples, fe, w.delta_mel);
    REQUIRE(ref.size() == m.frames());
    CHECK(m.dims() == 23);
    for (std::size_t t = 0; t < ref.size(); t += 5)
      for (std::size_t d = 0; d < 23; ++d)
        CHECK(m.values(t, d) == doctest::Approx(ref[t][d]).epsilon(1e-4).scale(1.0));
    CHECK(m.meta.warp.delta_mel == w.delta_mel);
  }
}

TEST_CASE("pre-emphasis uses the sample before the frame") {
  AudioBuffer b = noise(800, 9);
  FeatureConfig cfg;
  const Matrix<double> frames = frame_and_window(b, cfg);
  const auto w = hamming_window(400);
  // Frame 1 starts at 160; its first sample is emphasized against x[159].
  CHECK(frames(1, 0) ==
        doctest::Approx((b.samples[160] - 0.97 * double(b.samples[159])) * w[0]));
  CHECK(frames(0, 0) == doctest::Approx(b.samples[0] * w[0]));
}

TEST_CASE("silence is floored rather than producing -inf") {
  AudioBuffer b;
  b.sample_rate = kSampleRate;
  b.samples.assign(1600, 0.0f);
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kLogMel;
  const FeatureMatrix m = extract_features(b, cfg);
  for (float v : m.values.data()) CHECK(v == doctest::Approx(std::log(1e-10)));
}

TEST_CASE("config validation and bandwidth policy") {
  FeatureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.dims() == 13);
  cfg.kind = FeatureKind::kLogMel;
  CHECK(cfg.dims() == 23);

  auto bad = [](auto mutate) {
    FeatureConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidConfig;
    }
    return false;
  };
  CHECK(bad([](FeatureConfig& c) { c.dft_size = 500; }));
  CHECK(bad([](FeatureConfig& c) { c.dft_size = 256; }));  // smaller than the window
  CHECK(bad([](FeatureConfig& c) { c.hi_freq = 9000; }));
  CHECK(bad([](FeatureConfig& c) { c.lo_freq = 7000; c.hi_freq = 6000; }));
  CHECK(bad([](FeatureConfig& c) { c.num_ceps = 30; }));
  CHECK(bad([](FeatureConfig& c) { c.num_filters = 0; }));
  CHECK(bad([](FeatureConfig& c) { c.preemphasis = 1.5; }));

  CHECK(with_bandwidth_policy(FeatureConfig{}, true).hi_freq == 6200.0);
  CHECK(with_bandwidth_policy(FeatureConfig{}, false).hi_freq == 8000.0);
  CHECK(FeatureConfig{}.fingerprint() == FeatureConfig{}.fingerprint());
  CHECK(FeatureConfig{}.fingerprint() != with_bandwidth_policy(FeatureConfig{}, true).fingerprint());
  CHECK(parse_feature_kind("fbank") == FeatureKind::kLogMel);
  CHECK(parse_feature_kind("mfcc") == FeatureKind::kMfcc);
  CHECK_FALSE(parse_feature_kind("plp").has_value());
}
