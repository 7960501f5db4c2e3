// f0warp/tests/augment_test.cc

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

#include "doctest.h"
#include "f0warp/augment.h"
#include "f0warp/synth.h"
#include "support/oracles.h"

using namespace f0warp;

TEST_CASE("default plan f0_def values") {
  const AugmentationPlan p = make_plan();
  REQUIRE(p.size() == 7);
  CHECK(p.shifts_mel == std::vector<double>{0, 20, -20, 40, -40, 60, -60});
  CHECK(p.f0_def_values[0] == 100.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.f0_def_values[i] ==
          doctest::Approx(oracle::inv_mel(oracle::mel(100.0) - p.shifts_mel[i])).epsilon(1e-12));
  // Rounded values as published: 58.52 .. 143.74 Hz.
  CHECK(p.f0_def_values[6] == doctest::Approx(143.74).epsilon(1e-4));
  CHECK(p.f0_def_values[5] == doctest::Approx(58.52).epsilon(1e-4));
}

TEST_CASE("plan validation") {
  auto code = [](double base, std::vector<double> s) {
    try {
      make_plan(base, s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  CHECK(code(100.0, {0, 20, 20}) == ErrorCode::kDuplicateShift);
  CHECK(code(100.0, {0, -0.0}) == ErrorCode::kDuplicateShift);
  CHECK(code(100.0, {20, -20}) == ErrorCode::kMissingZeroShift);
  CHECK(code(100.0, {0, 200}) == ErrorCode::kDomainError);
  CHECK(code(-1.0, {0}) == ErrorCode::kDomainError);
  CHECK(make_plan(100.0, std::vector<double>{-0.0}).shifts_mel[0] == 0.0);
  CHECK_FALSE(std::signbit(make_plan(100.0, std::vector<double>{-0.0}).shifts_mel[0]));
}

TEST_CASE("variant warp composes utterance offset and perturbation") {
  const AugmentationPlan p = make_plan();
  for (double u : {80.0, 106.0, 210.0, 333.0}) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const WarpSpec w = variant_warp(p, i, u);
      const double expect = oracle::mel(u) - oracle::mel(100.0) + p.shifts_mel[i];
      CHECK(w.raw_delta_mel == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
      CHECK(std::abs(w.raw_delta_mel - expect) < 1e-9);
    }
  }
}

TEST_CASE("augment_utterance emits one matrix per plan entry") {
  const AudioBuffer audio = synth_harmonic(210.0, 0.5, 0.5);
  const FeatureConfig cfg = with_bandwidth_policy(FeatureConfig{}, true);
  const AugmentationPlan p = make_plan();
  const UtteranceF0 f0{210.0, 40, false};

  const auto plain = augment_utterance(audio, cfg, p, false, f0);
  REQUIRE(plain.size() == 7);
  CHECK(plain[0].meta.warp.is_identity());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(plain[i].meta.shift_mel == p.shifts_mel[i]);
    CHECK(plain[i].meta.warp.delta_mel == doctest::Approx(p.shifts_mel[i]));
    CHECK(plain[i].frames() == 48);
  }
  const auto norm = augment_utterance(audio, cfg, p, true, f0);
  CHECK(norm[0].meta.warp.delta_mel == doctest::Approx(oracle::mel(210.0) - oracle::mel(100.0)));
  CHECK_FALSE(norm[0].meta.fallback_used);
  // The zero-shift entry is exactly plain normalized extraction.
  CHECK(norm[0].values == extract_features(audio, cfg, compute_warp(210.0, 100.0)).values);
  CHECK(augment_utterance(audio, cfg, p, true, {100.0, 0, true})[3].meta.fallback_used);
}
