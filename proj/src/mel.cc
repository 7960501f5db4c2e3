// f0warp/mel.cc

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

#include "f0warp/mel.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "f0warp/features.h"

namespace f0warp {

namespace {

constexpr double kMelScale = 1127.0;
constexpr double kMelBreak = 700.0;

}  // namespace

double hz_to_mel(double hz) {
  if (!(hz >= 0.0) || !std::isfinite(hz))
    throw Error(ErrorCode::kDomainError,
                "hz_to_mel: frequency must be finite and >= 0, got " +
                    std::to_string(hz));
  return kMelScale * std::log1p(hz / kMelBreak);
}

double mel_to_hz(double mel) {
  if (!(mel >= 0.0) || !std::isfinite(mel))
    throw Error(ErrorCode::kDomainError,
                "mel_to_hz: Mel value must be finite and >= 0, got " +
                    std::to_string(mel));
  return kMelBreak * std::expm1(mel / kMelScale);
}

WarpSpec compute_warp(double f0_utt, double f0_def) {
  if (!(f0_utt > 0.0) || !(f0_def > 0.0) || !std::isfinite(f0_utt) ||
      !std::isfinite(f0_def)) {
    std::ostringstream msg;
    msg << "compute_warp: f0 values must be positive, got f0_utt=" << f0_utt
        << " f0_def=" << f0_def;
    throw Error(ErrorCode::kDomainError, msg.str());
  }
  WarpSpec w;
  w.f0_utt = f0_utt;
  w.f0_def = f0_def;
  w.raw_delta_mel = hz_to_mel(f0_utt) - hz_to_mel(f0_def);
  w.delta_mel = std::clamp(w.raw_delta_mel, -kMaxShiftMel, kMaxShiftMel);
  w.clamped = w.delta_mel != w.raw_delta_mel;
  return w;
}

std::vector<double> bin_mels(int dft_size, int sample_rate) {
  assert(dft_size > 0 && sample_rate > 0);
  const int num_bins = dft_size / 2 + 1;
  std::vector<double> coords(num_bins);
  const double bin_hz = static_cast<double>(sample_rate) / dft_size;
  for (int k = 0; k < num_bins; ++k) coords[k] = hz_to_mel(k * bin_hz);
  return coords;
}

std::vector<double> warp_bin_mels(int dft_size, int sample_rate,
                                  const WarpSpec& warp) {
  std::vector<double> coords = bin_mels(dft_size, sample_rate);
  for (double& m : coords) m -= warp.delta_mel;
  return coords;
}

MelFilterbank::MelFilterbank(Matrix<double> weights,
                             std::vector<double> centers_mel,
                             std::vector<double> edges_mel)
    : weights_(std::move(weights)),
      centers_mel_(std::move(centers_mel)),
      edges_mel_(std::move(edges_mel)),
      first_(weights_.rows(), 0),
      end_(weights_.rows(), 0) {
  for (std::size_t i = 0; i < weights_.rows(); ++i) {
    auto row = weights_.row(i);
    auto is_pos = [](double w) { return w > 0.0; };
    auto first = std::find_if(row.begin(), row.end(), is_pos);
    if (first == row.end()) continue;
    auto last = std::find_if(row.rbegin(), row.rend(), is_pos);
    first_[i] = static_cast<std::size_t>(first - row.begin());
    end_[i] = static_cast<std::size_t>(row.rend() - last);
  }
}

void MelFilterbank::apply(std::span<const double> power,
                          std::span<double> energies) const {
  assert(power.size() == num_bins() && energies.size() == num_filters());
  for (std::size_t i = 0; i < num_filters(); ++i) {
    double e = 0.0;
    for (std::size_t k = first_[i]; k < end_[i]; ++k) e += weights_(i, k) * power[k];
    energies[i] = e;
  }
}

MelFilterbank build_filterbank(const FeatureConfig& cfg,
                               std::span<const double> bin_coords) {
  assert(std::is_sorted(bin_coords.begin(), bin_coords.end()));
  const auto num_filters = static_cast<std::size_t>(cfg.num_filters);
  const double mel_lo = hz_to_mel(cfg.lo_freq);
  const double mel_hi = hz_to_mel(cfg.hi_freq);
  const double spacing = (mel_hi - mel_lo) / static_cast<double>(num_filters + 1);

  std::vector<double> edges(num_filters + 2);
  for (std::size_t j = 0; j < edges.size(); ++j)
    edges[j] = mel_lo + static_cast<double>(j) * spacing;

  Matrix<double> weights(num_filters, bin_coords.size());
  std::vector<double> centers(num_filters);
  for (std::size_t i = 0; i < num_filters; ++i) {
    const double left = edges[i], center = edges[i + 1], right = edges[i + 2];
    centers[i] = center;
    bool any = false;
    for (std::size_t k = 0; k < bin_coords.size(); ++k) {
      const double m = bin_coords[k];
      if (m <= left || m >= right) continue;
      const double w = m <= center ? (m - left) / (center - left)
                                   : (right - m) / (right - center);
      weights(i, k) = w;
      any = any || w > 0.0;
    }
    if (!any) {
      std::ostringstream msg;
      msg << "mel filter " << i << " [" << left << ", " << right
          << "] Mel covers no DFT bin (bins span " << bin_coords.front()
          << " .. " << bin_coords.back()
          << " Mel); shift, bandwidth or DFT size is incompatible";
      throw Error(ErrorCode::kEmptyFilter, msg.str());
    }
  }
  return MelFilterbank(std::move(weights), std::move(centers), std::move(edges));
}

}  // namespace f0warp
