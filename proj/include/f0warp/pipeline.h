// f0warp/pipeline.h

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

// Batch extraction. A manifest (JSON lines with "id", "audio" and an optional
// "text") goes in; an archive directory comes out:
//
//   <out>/index.jsonl    one ArchiveRecord per (id, shift), sorted
//   <out>/report.jsonl   one line per failed utterance, sorted by id
//   <out>/feats/<id>_shift<+s>.mwf
//
// Each worker owns an utterance end to end; the index is written once, after
// sorting, so the archive does not depend on worker count or scheduling.

#ifndef F0WARP_PIPELINE_H_
#define F0WARP_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "f0warp/augment.h"
#include "f0warp/features.h"
#include "f0warp/pitch.h"

namespace f0warp {

struct ManifestEntry {
  std::string id;
  std::filesystem::path audio_path;  // resolved against the manifest directory
  std::optional<std::string> transcript;
};

// Throws kParseError (message carries the 1-based line number) or
// kDuplicateId. Blank lines are skipped; an empty file is a valid manifest.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                          const std::filesystem::path& base_dir);

struct ArchiveRecord {
  std::string id;
  double shift_mel = 0.0;
  double f0_utt = 0.0;
  double f0_def = 0.0;
  double delta_mel = 0.0;
  bool clamped = false;
  bool fallback_used = false;
  std::size_t voiced_count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string path;  // relative to the archive directory

  std::string key() const;
  std::string to_json_line() const;
  static ArchiveRecord from_json_line(const std::string& line);
};

/// "<id>_shift+20", "<id>_shift-40", "<id>_shift+0".
std::string variant_key(const std::string& id, double shift_mel);

struct FailureRecord {
  std::string id;
  ErrorCode code = ErrorCode::kIoError;
  std::string message;
};

struct ProcessOptions {
  FeatureConfig features = with_bandwidth_policy(FeatureConfig{}, true);
  PitchConfig pitch;
  AugmentationPlan plan = make_plan();
  bool normalize = false;
  std::size_t workers = 1;
  bool strict = false;
};

struct ProcessResult {
  std::size_t utterances = 0;
  std::vector<ArchiveRecord> records;
  std::vector<FailureRecord> failures;

  /// 0 on full success, 2 when some utterances failed.
  int exit_code() const { return failures.empty() ? 0 : 2; }
};

// Warped runs (normalize, or any non-zero shift) must use hi_freq <= 6.2 kHz;
// otherwise kInvalidConfig is thrown before any work starts. In strict mode
// the first failing utterance (in manifest order) is rethrown.
ProcessResult process_dataset(const std::vector<ManifestEntry>& manifest,
                              const ProcessOptions& options,
                              const std::filesystem::path& out_dir);

std::vector<ArchiveRecord> read_index(const std::filesystem::path& archive_dir);

// Kaldi-style text archive: "<key>  [" then one row per line, the last row
// closed by " ]". An empty archive yields an empty file.
void export_text_archive(const std::filesystem::path& archive_dir,
                         const std::filesystem::path& out_path);

}  // namespace f0warp

#endif  // F0WARP_PIPELINE_H_
