// f0warp/features.h

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

#ifndef F0WARP_FEATURES_H_
#define F0WARP_FEATURES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "f0warp/audio_io.h"
#include "f0warp/common.h"
#include "f0warp/mel.h"

namespace f0warp {

enum class FeatureKind { kLogMel, kMfcc };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

struct FeatureConfig {
  static constexpr double kBaselineHiFreq = 8000.0;
  static constexpr double kWarpedHiFreq = 6200.0;

  double window = 0.025;  // seconds
  double hop = 0.010;     // seconds
  int dft_size = 512;
  int num_filters = 23;
  double lo_freq = 20.0;
  double hi_freq = kBaselineHiFreq;
  int num_ceps = 13;
  double preemphasis = 0.97;
  double log_floor = 1e-10;
  FeatureKind kind = FeatureKind::kMfcc;

  std::size_t window_samples(int sample_rate = kSampleRate) const;
  std::size_t hop_samples(int sample_rate = kSampleRate) const;
  std::size_t dims() const;

  // Throws kInvalidConfig describing the first violated constraint.
  void validate(int sample_rate = kSampleRate) const;

  // Stable textual digest of every field; equal configs give equal strings.
  std::string fingerprint() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Warped modes (normalization and/or perturbation) analyse only up to
// 6.2 kHz so that a +250 Mel shift still stays below Nyquist.
FeatureConfig with_bandwidth_policy(FeatureConfig cfg, bool warped);

struct FeatureMeta {
  std::string source_id;
  WarpSpec warp;
  double shift_mel = 0.0;  // augmentation offset of this variant
  bool fallback_used = false;
  std::string config_fingerprint;
};

struct FeatureMatrix {
  Matrix<float> values;  // frames x dims
  FeatureMeta meta;

  std::size_t frames() const { return values.rows(); }
  std::size_t dims() const { return values.cols(); }
};

/// 1 + floor((n - window) / hop), or 0 when n < window.
std::size_t num_frames(std::size_t num_samples, const FeatureConfig& cfg,
                       int sample_rate = kSampleRate);

// Frame t covers samples [t*hop, t*hop + window). Each frame is
// pre-emphasized against the sample just before it (0 at the start of the
// utterance) and Hamming windowed. The trailing partial frame is dropped.
// Throws kTooShort when the buffer holds less than one window.
Matrix<double> frame_and_window(const AudioBuffer& buffer,
                                const FeatureConfig& cfg);

std::vector<double> hamming_window(std::size_t length);

/// |DFT|^2 of `frame` zero-padded to dft_size, bins 0..dft_size/2.
std::vector<double> power_spectrum(std::span<const double> frame, int dft_size);

/// Orthonormal DCT-II; keeps the first `num_out` coefficients.
std::vector<double> dct_ii(std::span<const double> input, std::size_t num_out);
/// Inverse of the full orthonormal DCT-II (i.e. DCT-III).
std::vector<double> inverse_dct_ii(std::span<const double> coeffs);

// power spectrum -> warped filterbank -> log(max(e, log_floor))
// [-> DCT-II]. Throws kTooShort, kInvalidConfig or kEmptyFilter.
FeatureMatrix extract_features(const AudioBuffer& buffer,
                               const FeatureConfig& cfg, const WarpSpec& warp);

// Plain extraction on the unshifted Mel axis.
FeatureMatrix extract_features(const AudioBuffer& buffer,
                               const FeatureConfig& cfg);

}  // namespace f0warp

#endif  // F0WARP_FEATURES_H_
