// f0warp/features.cc

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

#include "f0warp/features.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "fft.h"

namespace f0warp {

namespace {

[[noreturn]] void bad_config(const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, "invalid feature config: " + why);
}

// Rows are the orthonormal DCT-II basis vectors.
Matrix<double> dct_matrix(std::size_t num_out, std::size_t n) {
  Matrix<double> m(num_out, n);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < num_out; ++j) {
    const double scale = std::sqrt((j == 0 ? 1.0 : 2.0) / nd);
    for (std::size_t i = 0; i < n; ++i)
      m(j, i) = scale * std::cos(std::numbers::pi * static_cast<double>(j) *
                                 (static_cast<double>(i) + 0.5) / nd);
  }
  return m;
}

void multiply(const Matrix<double>& m, std::span<const double> in,
              std::span<double> out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * in[c];
    out[r] = acc;
  }
}

void power_spectrum_into(const internal::Fft& fft, std::span<const double> frame,
                         std::vector<std::complex<double>>& scratch,
                         std::span<double> out) {
  std::fill(scratch.begin(), scratch.end(), std::complex<double>{});
  std::copy(frame.begin(), frame.end(), scratch.begin());
  fft.forward(scratch);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(scratch[k]);
}

FeatureMatrix extract_on_axis(const AudioBuffer& buffer, const FeatureConfig& cfg,
                              std::span<const double> coords) {
  const Matrix<double> frames = frame_and_window(buffer, cfg);
  const MelFilterbank fbank = build_filterbank(cfg, coords);

  const auto num_filters = static_cast<std::size_t>(cfg.num_filters);
  const auto num_bins = static_cast<std::size_t>(cfg.dft_size / 2 + 1);
  const bool mfcc = cfg.kind == FeatureKind::kMfcc;
  const Matrix<double> dct =
      mfcc ? dct_matrix(static_cast<std::size_t>(cfg.num_ceps), num_filters)
           : Matrix<double>();

  const internal::Fft fft(static_cast<std::size_t>(cfg.dft_size));
  std::vector<std::complex<double>> scratch(fft.size());
  std::vector<double> power(num_bins), log_mel(num_filters), ceps(cfg.dims());

  FeatureMatrix out;
  out.values = Matrix<float>(frames.rows(), cfg.dims());
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    power_spectrum_into(fft, frames.row(t), scratch, power);
    fbank.apply(power, log_mel);
    for (double& e : log_mel) e = std::log(std::max(e, cfg.log_floor));
    std::span<const double> result = log_mel;
    if (mfcc) {
      multiply(dct, log_mel, ceps);
      result = ceps;
    }
    auto dst = out.values.row(t);
    for (std::size_t d = 0; d < dst.size(); ++d) dst[d] = static_cast<float>(result[d]);
  }
  out.meta.source_id = buffer.source_id;
  out.meta.config_fingerprint = cfg.fingerprint();
  return out;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kMfcc ? "mfcc" : "log-mel";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  if (name == "mfcc") return FeatureKind::kMfcc;
  if (name == "log-mel" || name == "fbank") return FeatureKind::kLogMel;
  return std::nullopt;
}

std::size_t FeatureConfig::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(window * sample_rate));
}

std::size_t FeatureConfig::hop_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(hop * sample_rate));
}

std::size_t FeatureConfig::dims() const {
  return static_cast<std::size_t>(kind == FeatureKind::kMfcc ? num_ceps
                                                             : num_filters);
}

void FeatureConfig::validate(int sample_rate) const {
  if (!(window > 0.0) || window_samples(sample_rate) < 1)
    bad_config("window must be positive");
  if (!(hop > 0.0) || hop_samples(sample_rate) < 1)
    bad_config("hop must be positive");
  if (dft_size <= 0 || !internal::is_power_of_two(static_cast<std::size_t>(dft_size)))
    bad_config("dft_size must be a power of two, got " + std::to_string(dft_size));
  if (static_cast<std::size_t>(dft_size) < window_samples(sample_rate))
    bad_config("dft_size " + std::to_string(dft_size) + " is smaller than the " +
               std::to_string(window_samples(sample_rate)) + "-sample window");
  if (num_filters < 1) bad_config("num_filters must be >= 1");
  if (kind == FeatureKind::kMfcc && (num_ceps < 1 || num_ceps > num_filters))
    bad_config("num_ceps must be in [1, num_filters]");
  const double nyquist = 0.5 * sample_rate;
  if (!(lo_freq >= 0.0) || !(lo_freq < hi_freq) || !(hi_freq <= nyquist)) {
    std::ostringstream msg;
    msg << "need 0 <= lo_freq < hi_freq <= " << nyquist << ", got lo_freq="
        << lo_freq << " hi_freq=" << hi_freq;
    bad_config(msg.str());
  }
  if (!(preemphasis >= 0.0 && preemphasis <= 1.0))
    bad_config("preemphasis must be in [0, 1]");
  if (!(log_floor > 0.0)) bad_config("log_floor must be positive");
}

std::string FeatureConfig::fingerprint() const {
  std::ostringstream s;
  s << "kind=" << to_string(kind) << ";window=" << format_number(window)
    << ";hop=" << format_number(hop) << ";dft=" << dft_size
    << ";filters=" << num_filters << ";lo=" << format_number(lo_freq)
    << ";hi=" << format_number(hi_freq) << ";ceps=" << num_ceps
    << ";preemph=" << format_number(preemphasis)
    << ";floor=" << format_number(log_floor);
  return s.str();
}

FeatureConfig with_bandwidth_policy(FeatureConfig cfg, bool warped) {
  cfg.hi_freq = warped ? FeatureConfig::kWarpedHiFreq
                       : FeatureConfig::kBaselineHiFreq;
  return cfg;
}

std::size_t num_frames(std::size_t num_samples, const FeatureConfig& cfg,
                       int sample_rate) {
  const std::size_t window = cfg.window_samples(sample_rate);
  if (num_samples < window) return 0;
  return 1 + (num_samples - window) / cfg.hop_samples(sample_rate);
}

std::vector<double> hamming_window(std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
  return w;
}

Matrix<double> frame_and_window(const AudioBuffer& buffer,
                                const FeatureConfig& cfg) {
  const std::size_t window = cfg.window_samples(buffer.sample_rate);
  const std::size_t hop = cfg.hop_samples(buffer.sample_rate);
  if (buffer.too_short(window))
    throw Error(ErrorCode::kTooShort,
                "'" + buffer.source_id + "' has " +
                    std::to_string(buffer.samples.size()) +
                    " samples; need at least one " + std::to_string(window) +
                    "-sample window");

  const std::vector<double> taper = hamming_window(window);
  const std::size_t count = num_frames(buffer.samples.size(), cfg, buffer.sample_rate);
  const auto& x = buffer.samples;
  Matrix<double> frames(count, window);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * hop;
    double prev = start > 0 ? static_cast<double>(x[start - 1]) : 0.0;
    auto dst = frames.row(t);
    for (std::size_t n = 0; n < window; ++n) {
      const double cur = x[start + n];
      dst[n] = (cur - cfg.preemphasis * prev) * taper[n];
      prev = cur;
    }
  }
  return frames;
}

std::vector<double> power_spectrum(std::span<const double> frame, int dft_size) {
  if (dft_size <= 0 || !internal::is_power_of_two(static_cast<std::size_t>(dft_size)))
    throw Error(ErrorCode::kInvalidConfig, "dft_size must be a power of two");
  if (frame.size() > static_cast<std::size_t>(dft_size))
    throw Error(ErrorCode::kInvalidConfig, "frame longer than dft_size");
  const internal::Fft fft(static_cast<std::size_t>(dft_size));
  std::vector<std::complex<double>> scratch(fft.size());
  std::vector<double> out(static_cast<std::size_t>(dft_size / 2 + 1));
  power_spectrum_into(fft, frame, scratch, out);
  return out;
}

std::vector<double> dct_ii(std::span<const double> input, std::size_t num_out) {
  num_out = std::min(num_out, input.size());
  std::vector<double> out(num_out);
  multiply(dct_matrix(num_out, input.size()), input, out);
  return out;
}

std::vector<double> inverse_dct_ii(std::span<const double> coeffs) {
  const Matrix<double> basis = dct_matrix(coeffs.size(), coeffs.size());
  std::vector<double> out(coeffs.size(), 0.0);
  // Orthonormal basis: the inverse is the transpose.
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += basis(j, i) * coeffs[j];
    out[i] = acc;
  }
  return out;
}

FeatureMatrix extract_features(const AudioBuffer& buffer,
                               const FeatureConfig& cfg, const WarpSpec& warp) {
  cfg.validate(buffer.sample_rate);
  const std::vector<double> coords =
      warp_bin_mels(cfg.dft_size, buffer.sample_rate, warp);
  FeatureMatrix out = extract_on_axis(buffer, cfg, coords);
  out.meta.warp = warp;
  return out;
}

FeatureMatrix extract_features(const AudioBuffer& buffer,
                               const FeatureConfig& cfg) {
  cfg.validate(buffer.sample_rate);
  const std::vector<double> coords = bin_mels(cfg.dft_size, buffer.sample_rate);
  return extract_on_axis(buffer, cfg, coords);
}

}  // namespace f0warp
