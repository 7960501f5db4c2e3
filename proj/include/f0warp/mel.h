// f0warp/mel.h

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

// Mel scale, the f0-driven Mel-domain shift and the triangular filterbank
// evaluated on shifted DFT-bin coordinates.
//
// Normalizing an utterance with median f0 `u` towards a default f0 `d` moves
// every spectral landmark down by
//
//   delta = mel(u) - mel(d)
//
// Mels. Rather than resampling the spectrum, each DFT bin k keeps its power
// and is simply relabelled with the Mel coordinate mel(f_k) - delta; the
// filter triangles stay where they are. Perturbation (augmentation) is the
// same shift with a different `d`.

#ifndef F0WARP_MEL_H_
#define F0WARP_MEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "f0warp/common.h"

namespace f0warp {

struct FeatureConfig;

/// mel = 1127 ln(1 + f/700). Throws kDomainError for f < 0.
double hz_to_mel(double hz);
/// Exact inverse of hz_to_mel(). Throws kDomainError for m < 0.
double mel_to_hz(double mel);

// Largest |delta| the 6.2 kHz analysis band can absorb before the top filter
// would need energy above Nyquist.
inline constexpr double kMaxShiftMel = 250.0;

struct WarpSpec {
  double f0_utt = 100.0;
  double f0_def = 100.0;
  double raw_delta_mel = 0.0;  // mel(f0_utt) - mel(f0_def)
  double delta_mel = 0.0;      // raw_delta_mel clamped to +-kMaxShiftMel
  bool clamped = false;

  bool is_identity() const { return delta_mel == 0.0; }
};

// Throws kDomainError unless both frequencies are positive and finite.
WarpSpec compute_warp(double f0_utt, double f0_def);

/// Mel coordinate of each DFT bin 0..dft_size/2 after shifting by -delta.
std::vector<double> warp_bin_mels(int dft_size, int sample_rate,
                                  const WarpSpec& warp);

/// Unshifted coordinates: hz_to_mel(k * sample_rate / dft_size).
std::vector<double> bin_mels(int dft_size, int sample_rate);

class MelFilterbank {
 public:
  MelFilterbank(Matrix<double> weights, std::vector<double> centers_mel,
                std::vector<double> edges_mel);

  std::size_t num_filters() const { return weights_.rows(); }
  std::size_t num_bins() const { return weights_.cols(); }
  const Matrix<double>& weights() const { return weights_; }

  /// Filter centers in (normalized) Mel coordinates.
  const std::vector<double>& centers_mel() const { return centers_mel_; }
  /// num_filters + 2 equally spaced triangle corner points.
  const std::vector<double>& edges_mel() const { return edges_mel_; }

  /// Index of the first and one-past-last bin with positive weight.
  std::size_t first_bin(std::size_t filter) const { return first_[filter]; }
  std::size_t end_bin(std::size_t filter) const { return end_[filter]; }

  /// energies[i] = sum_k weights(i, k) * power[k].
  void apply(std::span<const double> power, std::span<double> energies) const;

 private:
  Matrix<double> weights_;
  std::vector<double> centers_mel_;
  std::vector<double> edges_mel_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> end_;
};

// Triangles are equally spaced in Mel between hz_to_mel(cfg.lo_freq) and
// hz_to_mel(cfg.hi_freq) and evaluated at `bin_coords`, which must be
// ascending. Throws kEmptyFilter if any triangle covers no bin.
MelFilterbank build_filterbank(const FeatureConfig& cfg,
                               std::span<const double> bin_coords);

}  // namespace f0warp

#endif  // F0WARP_MEL_H_
