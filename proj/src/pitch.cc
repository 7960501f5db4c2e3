// f0warp/pitch.cc

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

#include "f0warp/pitch.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace f0warp {

namespace {

// A later peak must reach this fraction of the best one to lose to an
// earlier (shorter-lag) peak.
constexpr double kOctaveTolerance = 0.9;

// The similarity is computed on a low-passed copy of the signal. Broad-band
// pulses otherwise give peaks narrower than one lag step.
constexpr double kLowpassHz = 1000.0;

// Second-order Butterworth section applied twice over the whole buffer.
std::vector<double> lowpass(std::span<const float> x, int sample_rate) {
  const double w = 2.0 * std::numbers::pi * kLowpassHz / sample_rate;
  const double alpha = std::sin(w) / std::numbers::sqrt2;  // Q = 1/sqrt(2)
  const double cw = std::cos(w);
  const double a0 = 1.0 + alpha;
  const double b0 = (1.0 - cw) / 2.0 / a0, b1 = (1.0 - cw) / a0, b2 = b0;
  const double a1 = -2.0 * cw / a0, a2 = (1.0 - alpha) / a0;

  std::vector<double> y(x.begin(), x.end());
  for (int pass = 0; pass < 2; ++pass) {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = in;
      y2 = y1;
      y1 = out;
      v = out;
    }
  }
  return y;
}

struct LagPeak {
  double lag = 0.0;
  double score = 0.0;
};

// Similarity for lags [lo, hi], stored at index lag - lo.
std::vector<double> similarity(std::span<const double> x, std::size_t lo,
                               std::size_t hi) {
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

  std::vector<double> s(hi - lo + 1, 0.0);
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const std::size_t overlap = n - lag;
    double cross = 0.0;
    for (std::size_t i = 0; i < overlap; ++i) cross += x[i] * x[i + lag];
    const double energy = prefix[overlap] + (prefix[n] - prefix[lag]);
    s[lag - lo] = energy > 0.0 ? 2.0 * cross / energy : 0.0;
  }
  return s;
}

// `s` covers lags [first_lag, first_lag + s.size()); candidate peaks are
// searched in the interior so both parabola neighbours exist.
LagPeak pick_peak(std::span<const double> s, std::size_t first_lag) {
  const std::size_t last = s.size() - 1;
  std::size_t best = 1;
  for (std::size_t i = 1; i < last; ++i)
    if (s[i] > s[best]) best = i;
  if (s[best] <= 0.0) return {};

  std::size_t chosen = best;
  for (std::size_t i = 1; i < best; ++i) {
    if (s[i] >= s[i - 1] && s[i] >= s[i + 1] &&
        s[i] >= kOctaveTolerance * s[best]) {
      chosen = i;
      break;
    }
  }

  const double a = s[chosen - 1], b = s[chosen], c = s[chosen + 1];
  const double denom = a - 2.0 * b + c;
  double offset = 0.0;
  double height = b;
  if (denom < 0.0) {
    offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    height = b - 0.25 * (a - c) * offset;
  }
  return {static_cast<double>(first_lag + chosen) + offset, height};
}

}  // namespace

std::size_t PitchConfig::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(window * sample_rate));
}

std::size_t PitchConfig::shift_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(shift * sample_rate));
}

void PitchConfig::validate(int sample_rate) const {
  std::ostringstream msg;
  if (!(f0_min > 0.0 && f0_min < f0_max && f0_max < 0.5 * sample_rate)) {
    msg << "need 0 < f0_min < f0_max < " << 0.5 * sample_rate
        << ", got f0_min=" << f0_min << " f0_max=" << f0_max;
  } else if (!(voicing_threshold >= 0.0 && voicing_threshold <= 1.0)) {
    msg << "voicing_threshold must be in [0, 1], got " << voicing_threshold;
  } else if (!(shift > 0.0) || shift_samples(sample_rate) < 1) {
    msg << "pitch shift must be positive";
  } else if (!(window > 0.0) ||
             static_cast<double>(window_samples(sample_rate)) <
                 std::ceil(sample_rate / f0_min) + 2.0) {
    msg << "pitch window of " << window << " s must exceed one period of f0_min="
        << f0_min << " Hz";
  } else {
    return;
  }
  throw Error(ErrorCode::kInvalidConfig, "invalid pitch config: " + msg.str());
}

std::size_t PitchTrack::voiced_count() const {
  return static_cast<std::size_t>(
      std::count_if(frames.begin(), frames.end(),
                    [](const PitchFrame& f) { return f.voiced(); }));
}

PitchTrack AutocorrelationPitchDetector::detect(const AudioBuffer& buffer,
                                                const PitchConfig& cfg) const {
  const int sr = buffer.sample_rate;
  cfg.validate(sr);
  const std::size_t window = cfg.window_samples(sr);
  const std::size_t shift = cfg.shift_samples(sr);
  if (buffer.samples.size() < window)
    throw Error(ErrorCode::kTooShort,
                "'" + buffer.source_id + "' has " +
                    std::to_string(buffer.samples.size()) +
                    " samples; pitch tracking needs at least " +
                    std::to_string(window));

  // One extra lag on each side feeds the parabolic refinement.
  const auto min_lag = static_cast<std::size_t>(std::floor(sr / cfg.f0_max));
  const auto max_lag = static_cast<std::size_t>(std::ceil(sr / cfg.f0_min));
  const std::size_t lo = std::max<std::size_t>(min_lag, 2) - 1;
  const std::size_t hi = max_lag + 1;

  const std::size_t count = 1 + (buffer.samples.size() - window) / shift;
  PitchTrack track;
  track.frame_shift = static_cast<double>(shift) / sr;
  track.frames.reserve(count);

  const std::vector<double> filtered = lowpass(buffer.samples, sr);
  std::vector<double> frame(window);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * shift;
    double mean = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
      frame[i] = filtered[start + i];
      mean += frame[i];
    }
    mean /= static_cast<double>(window);
    for (double& v : frame) v -= mean;

    const LagPeak peak = pick_peak(similarity(frame, lo, hi), lo);

    PitchFrame pf;
    pf.time = (static_cast<double>(start) + 0.5 * static_cast<double>(window)) / sr;
    pf.periodicity = std::clamp(peak.score, 0.0, 1.0);
    // Refinement can nudge an edge lag half a sample outside the range.
    if (peak.lag > 0.0 && pf.periodicity >= cfg.voicing_threshold)
      pf.f0 = std::clamp(sr / peak.lag, cfg.f0_min, cfg.f0_max);
    track.frames.push_back(pf);
  }
  return track;
}

PitchTrack detect_pitch(const AudioBuffer& buffer, const PitchConfig& cfg) {
  return AutocorrelationPitchDetector{}.detect(buffer, cfg);
}

UtteranceF0 median_f0(const PitchTrack& track, double default_f0) {
  std::vector<double> voiced;
  for (const PitchFrame& f : track.frames)
    if (f.f0) voiced.push_back(*f.f0);

  UtteranceF0 out;
  out.voiced_count = voiced.size();
  if (voiced.empty()) {
    out.f0_utt = default_f0;
    out.fallback_used = true;
    return out;
  }
  const auto mid = voiced.begin() + static_cast<std::ptrdiff_t>((voiced.size() - 1) / 2);
  std::nth_element(voiced.begin(), mid, voiced.end());
  out.f0_utt = *mid;
  return out;
}

}  // namespace f0warp
