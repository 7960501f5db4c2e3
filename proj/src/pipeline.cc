// f0warp/pipeline.cc

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

#include "f0warp/pipeline.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "f0warp/audio_io.h"
#include "f0warp/matrix_io.h"
#include "json.hpp"

namespace f0warp {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kParseError,
              "manifest line " + std::to_string(line) + ": " + why);
}

void check_id(const std::string& id, std::size_t line) {
  if (id.empty()) parse_error(line, "empty \"id\"");
  for (char c : id)
    if (c == '/' || c == '\\' || std::isspace(static_cast<unsigned char>(c)))
      parse_error(line, "id '" + id + "' contains whitespace or a path separator");
}

std::string format_float(float v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

struct UtteranceOutput {
  std::vector<ArchiveRecord> records;
  std::optional<FailureRecord> failure;
};

UtteranceOutput process_one(const ManifestEntry& entry, const ProcessOptions& opt,
                            const fs::path& out_dir) {
  UtteranceOutput out;
  try {
    AudioBuffer audio = read_wav(entry.audio_path);
    audio.source_id = entry.id;

    UtteranceF0 f0{opt.plan.base_f0_def, 0, false};
    if (opt.normalize) f0 = median_f0(detect_pitch(audio, opt.pitch), opt.plan.base_f0_def);

    // Everything is computed before anything is written, so a failing
    // utterance leaves no partial variants behind.
    const std::vector<FeatureMatrix> variants =
        augment_utterance(audio, opt.features, opt.plan, opt.normalize, f0);
    for (const FeatureMatrix& m : variants) {
      ArchiveRecord r;
      r.id = entry.id;
      r.shift_mel = m.meta.shift_mel;
      r.f0_utt = m.meta.warp.f0_utt;
      r.f0_def = m.meta.warp.f0_def;
      r.delta_mel = m.meta.warp.delta_mel;
      r.clamped = m.meta.warp.clamped;
      r.fallback_used = m.meta.fallback_used;
      r.voiced_count = f0.voiced_count;
      r.rows = m.frames();
      r.cols = m.dims();
      r.path = (fs::path("feats") / (r.key() + std::string(kMatrixExtension))).generic_string();
      write_matrix(out_dir / r.path, m.values);
      out.records.push_back(std::move(r));
    }
  } catch (const Error& e) {
    out.records.clear();
    out.failure = FailureRecord{entry.id, e.code(), e.what()};
  } catch (const std::exception& e) {
    out.records.clear();
    out.failure = FailureRecord{entry.id, ErrorCode::kIoError, e.what()};
  }
  return out;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const std::string& l : lines) os << l << '\n';
  if (!os) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const fs::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      parse_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) parse_error(line_no, "expected a JSON object");
    if (!obj.contains("id") || !obj["id"].is_string())
      parse_error(line_no, "missing string field \"id\"");
    if (!obj.contains("audio") || !obj["audio"].is_string())
      parse_error(line_no, "missing string field \"audio\"");

    ManifestEntry e;
    e.id = obj["id"].get<std::string>();
    check_id(e.id, line_no);
    const fs::path audio = obj["audio"].get<std::string>();
    e.audio_path = audio.is_absolute() ? audio : base_dir / audio;
    if (obj.contains("text")) {
      if (!obj["text"].is_string()) parse_error(line_no, "\"text\" must be a string");
      e.transcript = obj["text"].get<std::string>();
    }
    if (!seen.insert(e.id).second)
      throw Error(ErrorCode::kDuplicateId, "manifest line " + std::to_string(line_no) +
                                               ": duplicate id '" + e.id + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open manifest " + path.string());
  return parse_manifest(is, path.parent_path());
}

std::string variant_key(const std::string& id, double shift_mel) {
  return id + "_shift" + (shift_mel < 0.0 ? "" : "+") + format_number(shift_mel);
}

std::string ArchiveRecord::key() const { return variant_key(id, shift_mel); }

std::string ArchiveRecord::to_json_line() const {
  json j;
  j["id"] = id;
  j["shift_mel"] = shift_mel;
  j["f0_utt"] = f0_utt;
  j["f0_def"] = f0_def;
  j["delta_mel"] = delta_mel;
  j["clamped"] = clamped;
  j["fallback_used"] = fallback_used;
  j["voiced_count"] = voiced_count;
  j["rows"] = rows;
  j["cols"] = cols;
  j["path"] = path;
  return j.dump();
}

ArchiveRecord ArchiveRecord::from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    ArchiveRecord r;
    r.id = j.at("id").get<std::string>();
    r.shift_mel = j.at("shift_mel").get<double>();
    r.f0_utt = j.at("f0_utt").get<double>();
    r.f0_def = j.at("f0_def").get<double>();
    r.delta_mel = j.at("delta_mel").get<double>();
    r.clamped = j.at("clamped").get<bool>();
    r.fallback_used = j.at("fallback_used").get<bool>();
    r.voiced_count = j.at("voiced_count").get<std::size_t>();
    r.rows = j.at("rows").get<std::size_t>();
    r.cols = j.at("cols").get<std::size_t>();
    r.path = j.at("path").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad index record: ") + e.what());
  }
}

ProcessResult process_dataset(const std::vector<ManifestEntry>& manifest,
                              const ProcessOptions& options, const fs::path& out_dir) {
  options.features.validate();
  options.pitch.validate();
  const bool shifted = std::any_of(options.plan.shifts_mel.begin(),
                                   options.plan.shifts_mel.end(),
                                   [](double s) { return s != 0.0; });
  if ((options.normalize || shifted) &&
      options.features.hi_freq > FeatureConfig::kWarpedHiFreq)
    throw Error(ErrorCode::kInvalidConfig,
                "warped extraction needs hi_freq <= 6200 Hz, got " +
                    format_number(options.features.hi_freq));

  std::error_code ec;
  fs::create_directories(out_dir / "feats", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<UtteranceOutput> outputs(manifest.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.size()) return;
      outputs[i] = process_one(manifest[i], options, out_dir);
      if (options.strict && outputs[i].failure) stop.store(true);
    }
  };
  const std::size_t num_workers =
      std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(manifest.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < num_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  ProcessResult result;
  result.utterances = manifest.size();
  for (UtteranceOutput& o : outputs) {
    if (o.failure) {
      if (options.strict)
        throw Error(o.failure->code, "utterance '" + o.failure->id + "': " + o.failure->message);
      result.failures.push_back(std::move(*o.failure));
    }
    for (ArchiveRecord& r : o.records) result.records.push_back(std::move(r));
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const ArchiveRecord& a, const ArchiveRecord& b) {
              return std::tie(a.id, a.shift_mel) < std::tie(b.id, b.shift_mel);
            });
  std::sort(result.failures.begin(), result.failures.end(),
            [](const FailureRecord& a, const FailureRecord& b) { return a.id < b.id; });

  std::vector<std::string> index_lines, report_lines;
  for (const ArchiveRecord& r : result.records) index_lines.push_back(r.to_json_line());
  for (const FailureRecord& f : result.failures) {
    json j;
    j["id"] = f.id;
    j["error"] = std::string(to_string(f.code));
    j["message"] = f.message;
    report_lines.push_back(j.dump());
  }
  write_lines(out_dir / "index.jsonl", index_lines);
  write_lines(out_dir / "report.jsonl", report_lines);
  return result;
}

std::vector<ArchiveRecord> read_index(const fs::path& archive_dir) {
  const fs::path path = archive_dir / "index.jsonl";
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<ArchiveRecord> records;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) records.push_back(ArchiveRecord::from_json_line(line));
  return records;
}

void export_text_archive(const fs::path& archive_dir, const fs::path& out_path) {
  const std::vector<ArchiveRecord> records = read_index(archive_dir);
  std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + out_path.string());
  for (const ArchiveRecord& r : records) {
    const Matrix<float> m = read_matrix(archive_dir / r.path);
    os << r.key() << "  [";
    if (m.rows() == 0) {
      os << " ]\n";
      continue;
    }
    for (std::size_t t = 0; t < m.rows(); ++t) {
      os << "\n ";
      for (float v : m.row(t)) os << ' ' << format_float(v);
    }
    os << " ]\n";
  }
  if (!os) throw Error(ErrorCode::kIoError, "short write to " + out_path.string());
}

}  // namespace f0warp
