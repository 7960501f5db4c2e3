// f0warp/augment.cc

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

#include "f0warp/augment.h"

#include <algorithm>
#include <cmath>

namespace f0warp {

AugmentationPlan make_plan(double base_f0_def, std::span<const double> shifts_mel) {
  if (!(base_f0_def > 0.0) || !std::isfinite(base_f0_def))
    throw Error(ErrorCode::kDomainError, "base f0_def must be positive");

  AugmentationPlan plan;
  plan.base_f0_def = base_f0_def;
  const double base_mel = hz_to_mel(base_f0_def);
  bool has_zero = false;
  for (double shift : shifts_mel) {
    if (!std::isfinite(shift))
      throw Error(ErrorCode::kDomainError, "augmentation shift must be finite");
    shift += 0.0;  // folds -0 into +0
    if (std::find(plan.shifts_mel.begin(), plan.shifts_mel.end(), shift) !=
        plan.shifts_mel.end())
      throw Error(ErrorCode::kDuplicateShift,
                  "augmentation shift " + format_number(shift) + " Mel listed twice");
    if (base_mel - shift <= 0.0)
      throw Error(ErrorCode::kDomainError,
                  "shift " + format_number(shift) + " Mel puts f0_def at or below 0 Hz");
    has_zero = has_zero || shift == 0.0;
    plan.shifts_mel.push_back(shift);
    // The zero entry reuses the base verbatim so it matches plain extraction
    // bit for bit.
    plan.f0_def_values.push_back(shift == 0.0 ? base_f0_def
                                              : mel_to_hz(base_mel - shift));
  }
  if (!has_zero)
    throw Error(ErrorCode::kMissingZeroShift,
                "augmentation plan must contain the 0 Mel shift");
  return plan;
}

WarpSpec variant_warp(const AugmentationPlan& plan, std::size_t i, double f0_utt) {
  return compute_warp(f0_utt, plan.f0_def_values.at(i));
}

std::vector<FeatureMatrix> augment_utterance(const AudioBuffer& buffer,
                                             const FeatureConfig& cfg,
                                             const AugmentationPlan& plan,
                                             bool normalize,
                                             const UtteranceF0& f0) {
  const double f0_utt = normalize ? f0.f0_utt : plan.base_f0_def;
  std::vector<FeatureMatrix> out;
  out.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    FeatureMatrix m = extract_features(buffer, cfg, variant_warp(plan, i, f0_utt));
    m.meta.shift_mel = plan.shifts_mel[i];
    m.meta.fallback_used = normalize && f0.fallback_used;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace f0warp
