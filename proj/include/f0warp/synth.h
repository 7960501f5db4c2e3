// f0warp/synth.h

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

// Deterministic test signals: band-limited pulse trains and source-filter
// vowels, plus the filterbank-alignment experiment built on them.

#ifndef F0WARP_SYNTH_H_
#define F0WARP_SYNTH_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "f0warp/audio_io.h"
#include "f0warp/features.h"

namespace f0warp {

struct VowelSpec {
  double f0 = 106.0;
  std::array<double, 3> formants = {300.0, 2300.0, 3000.0};
  std::array<double, 3> bandwidths = {60.0, 100.0, 120.0};
  double duration = 1.0;   // seconds
  double amplitude = 0.8;  // peak, [0, 1]

  // Throws kDomainError unless 0 < f0 < F1 < F2 < F3 < Nyquist, bandwidths
  // are positive, duration is positive and amplitude is in [0, 1].
  void validate(int sample_rate = kSampleRate) const;

  friend bool operator==(const VowelSpec&, const VowelSpec&) = default;
};

/// Sum of equal-amplitude cosine harmonics of f0 below Nyquist, scaled so the
/// peak magnitude equals `amplitude`.
AudioBuffer synth_harmonic(double f0, double duration, double amplitude);

// Cascade of two-pole resonators, pole radius exp(-pi B / sr) at angle
// 2 pi F / sr, each normalized to unit gain at DC.
class FormantFilter {
 public:
  FormantFilter(std::span<const double> formants,
                std::span<const double> bandwidths, int sample_rate = kSampleRate);

  void reset();
  void process(std::span<double> signal);

 private:
  struct Section {
    double gain, a1, a2;
    double y1 = 0.0, y2 = 0.0;
  };
  std::vector<Section> sections_;
};

/// Pulse train at spec.f0 through the formant cascade, peak-normalized.
AudioBuffer synth_vowel(const VowelSpec& spec);

// Moves every formant by the Mel distance between the two f0 values so that
// mel(Fx) - mel(f0) is preserved; bandwidths scale with their formant.
// Throws kDomainError if a formant would reach Nyquist.
VowelSpec shift_vowel_for_f0(const VowelSpec& ref, double target_f0);

// Adds white Gaussian noise at the requested SNR relative to the buffer RMS.
void add_white_noise(AudioBuffer& buffer, double snr_db, std::uint64_t seed);

// 15 log-Mel filters over 20 Hz - 6 kHz.
FeatureConfig alignment_feature_config();

/// Mean over frames of the Euclidean distance between matching rows.
double mean_frame_distance(const FeatureMatrix& a, const FeatureMatrix& b);

struct AlignmentReport {
  double f0_ref = 0.0;      // detected median f0 of the reference vowel
  double f0_target = 0.0;   // detected median f0 of the shifted vowel
  double unnormalized = 0.0;
  double normalized = 0.0;

  double ratio() const { return normalized / unnormalized; }
};

// Synthesizes `ref` and shift_vowel_for_f0(ref, target_f0), then compares
// their log-Mel frames with and without normalizing each to `f0_def`.
AlignmentReport vowel_alignment(const VowelSpec& ref, double target_f0,
                                double f0_def = 100.0);

}  // namespace f0warp

#endif  // F0WARP_SYNTH_H_
