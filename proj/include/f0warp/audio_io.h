// f0warp/audio_io.h

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

#ifndef F0WARP_AUDIO_IO_H_
#define F0WARP_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "f0warp/common.h"

namespace f0warp {

/// Mono PCM waveform, amplitudes nominally in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = kSampleRate;
  std::string source_id;

  /// True when the buffer cannot hold a single analysis window
  /// (400 samples = 25 ms at 16 kHz by default).
  bool too_short(std::size_t window_samples = 400) const {
    return samples.size() < window_samples;
  }

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE file holding mono 16-bit linear PCM at 16 kHz.
// Samples are divided by 32768, so -32768 maps to exactly -1.0.
// Throws Error with kUnsupportedFormat, kChannelMismatch, kRateMismatch or
// kCorruptFile. Never resamples.
AudioBuffer read_wav(const std::filesystem::path& path);

// Same as read_wav() but from an in-memory byte image.
AudioBuffer parse_wav(std::string_view bytes, std::string source_id = {});

// Writes the format read_wav() accepts. Samples are scaled by 32768,
// rounded to nearest and saturated to the int16 range.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer);
std::string encode_wav(const AudioBuffer& buffer);

}  // namespace f0warp

#endif  // F0WARP_AUDIO_IO_H_
