// f0warp/synth.cc

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

#include "f0warp/synth.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "f0warp/mel.h"
#include "f0warp/pitch.h"

namespace f0warp {

namespace {

[[noreturn]] void domain(const std::string& why) {
  throw Error(ErrorCode::kDomainError, why);
}

std::size_t sample_count(double duration) {
  return static_cast<std::size_t>(std::lround(duration * kSampleRate));
}

// Unscaled cosine pulse train, peak value = number of harmonics at n = 0.
std::vector<double> pulse_train(double f0, std::size_t n) {
  const double nyquist = 0.5 * kSampleRate;
  std::vector<double> x(n, 0.0);
  for (int h = 1; h * f0 < nyquist; ++h) {
    const double cycles_per_sample = h * f0 / kSampleRate;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = cycles_per_sample * static_cast<double>(i);
      x[i] += std::cos(2.0 * std::numbers::pi * (phase - std::floor(phase)));
    }
  }
  return x;
}

AudioBuffer to_buffer(const std::vector<double>& x, double amplitude) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  AudioBuffer out;
  out.samples.resize(x.size(), 0.0f);
  if (peak > 0.0 && amplitude > 0.0) {
    const double scale = amplitude / peak;
    for (std::size_t i = 0; i < x.size(); ++i)
      out.samples[i] = static_cast<float>(x[i] * scale);
  }
  return out;
}

}  // namespace

void VowelSpec::validate(int sample_rate) const {
  const double nyquist = 0.5 * sample_rate;
  std::ostringstream msg;
  if (!(f0 > 0.0 && f0 < formants[0] && formants[0] < formants[1] &&
        formants[1] < formants[2] && formants[2] < nyquist)) {
    msg << "vowel needs 0 < f0 < F1 < F2 < F3 < " << nyquist << " Hz, got f0="
        << f0 << " F=(" << formants[0] << ", " << formants[1] << ", "
        << formants[2] << ")";
    domain(msg.str());
  }
  for (double b : bandwidths)
    if (!(b > 0.0) || !std::isfinite(b)) domain("formant bandwidths must be positive");
  if (!(duration > 0.0)) domain("duration must be positive");
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) domain("amplitude must be in [0, 1]");
}

AudioBuffer synth_harmonic(double f0, double duration, double amplitude) {
  if (!(f0 > 0.0 && f0 < 0.5 * kSampleRate))
    domain("synth_harmonic: f0 must be in (0, Nyquist), got " + format_number(f0));
  if (!(duration > 0.0)) domain("synth_harmonic: duration must be positive");
  if (!(amplitude >= 0.0 && amplitude <= 1.0))
    domain("synth_harmonic: amplitude must be in [0, 1]");
  AudioBuffer out = to_buffer(pulse_train(f0, sample_count(duration)), amplitude);
  out.source_id = "harmonic_" + format_number(f0);
  return out;
}

FormantFilter::FormantFilter(std::span<const double> formants,
                             std::span<const double> bandwidths, int sample_rate) {
  assert(formants.size() == bandwidths.size());
  for (std::size_t i = 0; i < formants.size(); ++i) {
    const double r = std::exp(-std::numbers::pi * bandwidths[i] / sample_rate);
    const double theta = 2.0 * std::numbers::pi * formants[i] / sample_rate;
    const double a1 = 2.0 * r * std::cos(theta);
    const double a2 = -r * r;
    sections_.push_back({1.0 - a1 - a2, a1, a2});
  }
}

void FormantFilter::reset() {
  for (Section& s : sections_) s.y1 = s.y2 = 0.0;
}

void FormantFilter::process(std::span<double> signal) {
  for (Section& s : sections_) {
    for (double& v : signal) {
      const double y = s.gain * v + s.a1 * s.y1 + s.a2 * s.y2;
      s.y2 = s.y1;
      s.y1 = y;
      v = y;
    }
  }
}

AudioBuffer synth_vowel(const VowelSpec& spec) {
  spec.validate();
  std::vector<double> x = pulse_train(spec.f0, sample_count(spec.duration));
  FormantFilter filter(spec.formants, spec.bandwidths);
  filter.process(x);
  AudioBuffer out = to_buffer(x, spec.amplitude);
  out.source_id = "vowel_" + format_number(spec.f0);
  return out;
}

VowelSpec shift_vowel_for_f0(const VowelSpec& ref, double target_f0) {
  ref.validate();
  if (!(target_f0 > 0.0 && target_f0 < 0.5 * kSampleRate))
    domain("target f0 must be in (0, Nyquist), got " + format_number(target_f0));
  if (target_f0 == ref.f0) return ref;

  const double shift = hz_to_mel(target_f0) - hz_to_mel(ref.f0);
  VowelSpec out = ref;
  out.f0 = target_f0;
  for (std::size_t i = 0; i < out.formants.size(); ++i) {
    const double shifted_mel = hz_to_mel(ref.formants[i]) + shift;
    if (shifted_mel <= 0.0)
      domain("formant F" + std::to_string(i + 1) + " would drop below 0 Hz");
    const double f = mel_to_hz(shifted_mel);
    if (f >= 0.5 * kSampleRate)
      domain("formant F" + std::to_string(i + 1) + " would move to " +
             format_number(f) + " Hz, at or above Nyquist");
    out.bandwidths[i] = ref.bandwidths[i] * (f / ref.formants[i]);
    out.formants[i] = f;
  }
  out.validate();
  return out;
}

void add_white_noise(AudioBuffer& buffer, double snr_db, std::uint64_t seed) {
  if (buffer.samples.empty()) return;
  double power = 0.0;
  for (float s : buffer.samples) power += static_cast<double>(s) * s;
  power /= static_cast<double>(buffer.samples.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (float& s : buffer.samples) s = static_cast<float>(s + noise(rng));
}

FeatureConfig alignment_feature_config() {
  FeatureConfig cfg;
  cfg.num_filters = 15;
  cfg.lo_freq = 20.0;
  cfg.hi_freq = 6000.0;
  cfg.kind = FeatureKind::kLogMel;
  return cfg;
}

double mean_frame_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
  const std::size_t frames = std::min(a.frames(), b.frames());
  if (frames == 0 || a.dims() != b.dims())
    throw Error(ErrorCode::kInvalidConfig, "feature matrices are not comparable");
  double total = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    double sq = 0.0;
    for (std::size_t d = 0; d < a.dims(); ++d) {
      const double diff = static_cast<double>(a.values(t, d)) - b.values(t, d);
      sq += diff * diff;
    }
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(frames);
}

AlignmentReport vowel_alignment(const VowelSpec& ref, double target_f0,
                                double f0_def) {
  const AudioBuffer a = synth_vowel(ref);
  const AudioBuffer b = synth_vowel(shift_vowel_for_f0(ref, target_f0));
  const FeatureConfig cfg = alignment_feature_config();

  AlignmentReport report;
  report.f0_ref = median_f0(detect_pitch(a), f0_def).f0_utt;
  report.f0_target = median_f0(detect_pitch(b), f0_def).f0_utt;
  report.unnormalized =
      mean_frame_distance(extract_features(a, cfg), extract_features(b, cfg));
  report.normalized = mean_frame_distance(
      extract_features(a, cfg, compute_warp(report.f0_ref, f0_def)),
      extract_features(b, cfg, compute_warp(report.f0_target, f0_def)));
  return report;
}

}  // namespace f0warp
