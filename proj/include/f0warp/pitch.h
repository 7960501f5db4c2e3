// f0warp/pitch.h

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

#ifndef F0WARP_PITCH_H_
#define F0WARP_PITCH_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "f0warp/audio_io.h"

namespace f0warp {

struct PitchConfig {
  double f0_min = 50.0;             // Hz
  double f0_max = 500.0;            // Hz
  double voicing_threshold = 0.5;   // periodicity score
  double window = 0.040;            // seconds
  double shift = 0.010;             // seconds

  std::size_t window_samples(int sample_rate = kSampleRate) const;
  std::size_t shift_samples(int sample_rate = kSampleRate) const;

  // Throws kInvalidConfig unless 0 < f0_min < f0_max < sample_rate / 2 and
  // the window is longer than one period of f0_min.
  void validate(int sample_rate = kSampleRate) const;

  friend bool operator==(const PitchConfig&, const PitchConfig&) = default;
};

struct PitchFrame {
  double time = 0.0;          // frame center, seconds
  std::optional<double> f0;   // empty when unvoiced
  double periodicity = 0.0;   // [0, 1]

  bool voiced() const { return f0.has_value(); }
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  double frame_shift = 0.0;

  std::size_t voiced_count() const;
};

struct UtteranceF0 {
  double f0_utt = 100.0;
  std::size_t voiced_count = 0;
  bool fallback_used = false;
};

// Contract for pluggable f0 trackers. Implementations must emit one frame
// per analysis window, mark a frame voiced iff its periodicity reaches
// cfg.voicing_threshold, and keep voiced f0 inside [f0_min, f0_max].
class PitchDetector {
 public:
  virtual ~PitchDetector() = default;
  virtual PitchTrack detect(const AudioBuffer& buffer,
                            const PitchConfig& cfg) const = 0;
};

// Reference tracker. Per frame (mean removed) it evaluates the normalized
// difference-function similarity
//
//   s(lag) = 2 sum x[n] x[n+lag] / (sum x[n]^2 + sum x[n+lag]^2)
//
// over lags covering [f0_min, f0_max], takes the shortest-lag local peak
// within 10% of the best one (guards against picking a sub-octave), refines
// it with a parabola through the neighbouring lags and reports the refined
// peak height as periodicity. The score is invariant to input gain.
class AutocorrelationPitchDetector final : public PitchDetector {
 public:
  PitchTrack detect(const AudioBuffer& buffer,
                    const PitchConfig& cfg) const override;
};

/// Runs the reference detector. Throws kTooShort if the buffer is shorter
/// than one pitch window.
PitchTrack detect_pitch(const AudioBuffer& buffer, const PitchConfig& cfg = {});

/// Median over voiced frames (lower middle for even counts); falls back to
/// `default_f0` when nothing is voiced.
UtteranceF0 median_f0(const PitchTrack& track, double default_f0);

}  // namespace f0warp

#endif  // F0WARP_PITCH_H_
