// f0warp/augment.h

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

// f0 perturbation: the same utterance is extracted several times, each time
// with a different default f0, which adds a fixed Mel offset on top of the
// normalization shift. With base 100 Hz and offsets 0, +-20, +-40, +-60 Mels
// the defaults are 58.52 ... 143.74 Hz and the data grows sevenfold.

#ifndef F0WARP_AUGMENT_H_
#define F0WARP_AUGMENT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "f0warp/audio_io.h"
#include "f0warp/features.h"
#include "f0warp/pitch.h"

namespace f0warp {

inline constexpr double kDefaultF0Def = 100.0;
inline constexpr double kDefaultShiftsMel[] = {0.0, 20.0, -20.0, 40.0,
                                               -40.0, 60.0, -60.0};

struct AugmentationPlan {
  double base_f0_def = kDefaultF0Def;
  std::vector<double> shifts_mel;
  // f0_def_values[i] = mel_to_hz(hz_to_mel(base) - shifts_mel[i]); a positive
  // shift lowers the default and therefore raises delta.
  std::vector<double> f0_def_values;

  std::size_t size() const { return shifts_mel.size(); }
};

// Throws kDuplicateShift, kMissingZeroShift, or kDomainError when a shift
// would push the default below 0 Hz.
AugmentationPlan make_plan(double base_f0_def = kDefaultF0Def,
                           std::span<const double> shifts_mel = kDefaultShiftsMel);

// Warp of plan entry `i` for an utterance whose normalization factor is
// `f0_utt` (pass the plan base for un-normalized extraction).
WarpSpec variant_warp(const AugmentationPlan& plan, std::size_t i, double f0_utt);

// One FeatureMatrix per plan entry, in plan order. With `normalize` the
// utterance median f0 drives the shift, otherwise f0_utt := plan base.
// `cfg` is used as given; apply with_bandwidth_policy() beforehand.
std::vector<FeatureMatrix> augment_utterance(const AudioBuffer& buffer,
                                             const FeatureConfig& cfg,
                                             const AugmentationPlan& plan,
                                             bool normalize,
                                             const UtteranceF0& f0);

}  // namespace f0warp

#endif  // F0WARP_AUGMENT_H_
