// f0warp/cli.cc

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

#include "f0warp/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "f0warp/audio_io.h"
#include "f0warp/augment.h"
#include "f0warp/features.h"
#include "f0warp/matrix_io.h"
#include "f0warp/pipeline.h"
#include "f0warp/pitch.h"
#include "f0warp/synth.h"
#include "json.hpp"

namespace f0warp::cli {

namespace fs = std::filesystem;

namespace {

// Bad flag values or flag combinations; reported with exit code 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join_numbers(std::span<const double> values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ',';
    s += format_number(v);
  }
  return s;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct FeatureFlags {
  FeatureConfig cfg;
  std::optional<double> hi_freq;
  std::string kind{to_string(FeatureConfig{}.kind)};

  void attach(CLI::App* app, bool with_kind) {
    app->add_option("--window", cfg.window, "Analysis window (s)")->capture_default_str();
    app->add_option("--hop", cfg.hop, "Frame shift (s)")->capture_default_str();
    app->add_option("--dft-size", cfg.dft_size, "DFT length (power of two)")
        ->capture_default_str();
    app->add_option("--num-filters", cfg.num_filters, "Number of Mel filters")
        ->capture_default_str();
    app->add_option("--lo-freq", cfg.lo_freq, "Lowest filterbank frequency (Hz)")
        ->capture_default_str();
    app->add_option("--hi-freq", hi_freq,
                    "Highest filterbank frequency (Hz) [default: 8000, or 6200 "
                    "when normalizing or perturbing]");
    app->add_option("--num-ceps", cfg.num_ceps, "Cepstra kept, including c0")
        ->capture_default_str();
    app->add_option("--preemphasis", cfg.preemphasis, "Pre-emphasis coefficient")
        ->capture_default_str();
    app->add_option("--log-floor", cfg.log_floor, "Energy floor before the log")
        ->capture_default_str();
    if (with_kind)
      app->add_option("--kind", kind, "Feature type")
          ->check(CLI::IsMember({"mfcc", "log-mel"}))
          ->capture_default_str();
  }

  // Applies the bandwidth policy; an explicit --hi-freq above 6.2 kHz is
  // rejected when the axis is shifted.
  FeatureConfig resolve(bool warped, std::optional<FeatureKind> forced = {}) const {
    FeatureConfig out = with_bandwidth_policy(cfg, warped);
    if (hi_freq) {
      if (warped && *hi_freq > FeatureConfig::kWarpedHiFreq)
        throw UsageError("--hi-freq " + format_number(*hi_freq) +
                         " conflicts with f0 normalization/perturbation: shifted "
                         "features are limited to 6200 Hz so a +250 Mel shift "
                         "stays below Nyquist");
      out.hi_freq = *hi_freq;
    }
    out.kind = forced ? *forced : *parse_feature_kind(kind);
    try {
      out.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return out;
  }
};

struct PitchFlags {
  PitchConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--f0-min", cfg.f0_min, "Lowest f0 searched (Hz)")->capture_default_str();
    app->add_option("--f0-max", cfg.f0_max, "Highest f0 searched (Hz)")->capture_default_str();
    app->add_option("--voicing-threshold", cfg.voicing_threshold,
                    "Periodicity needed to call a frame voiced")
        ->capture_default_str();
    app->add_option("--pitch-window", cfg.window, "Pitch analysis window (s)")
        ->capture_default_str();
    app->add_option("--pitch-shift", cfg.shift, "Pitch frame shift (s)")
        ->capture_default_str();
  }

  PitchConfig resolve() const {
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

AugmentationPlan plan_from_flags(double f0_def, const std::string& shifts) {
  try {
    const std::vector<double> values = parse_number_list(shifts);
    return make_plan(f0_def, values);
  } catch (const Error& e) {
    throw UsageError(std::string("--augment-shifts: ") + e.what());
  }
}

void write_text_matrix(std::ostream& os, const std::string& key, const Matrix<float>& m) {
  os << key << "  [";
  for (std::size_t t = 0; t < m.rows(); ++t) {
    os << "\n ";
    for (float v : m.row(t)) {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      os << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
  }
  os << " ]\n";
}

std::ostream& open_or(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return file;
}

std::size_t default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    std::size_t n = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n == 0)
      throw UsageError(std::string(kWorkersEnv) + " must be a positive integer, got '" +
                       std::string(s) + "'");
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw Error(ErrorCode::kParseError, "empty entry in list '" + text + "'");
    item = item.substr(b, e - b + 1);
    if (!item.empty() && item.front() == '+') item.erase(0, 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v))
      throw Error(ErrorCode::kParseError, "'" + item + "' is not a number");
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorCode::kParseError, "empty list");
  return values;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"f0-based Mel-domain normalization and augmentation for speech features",
               "f0warp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "f0warp 0.1.0");

  // pitch
  auto* pitch = app.add_subcommand("pitch", "Per-frame f0 track (CSV) and utterance median (JSON)");
  std::string pitch_in, pitch_csv, pitch_summary;
  double pitch_default = kDefaultF0Def;
  PitchFlags pitch_flags;
  pitch->add_option("--in", pitch_in, "Input WAV (mono, 16-bit, 16 kHz)")->required();
  pitch->add_option("--csv", pitch_csv, "Frame CSV destination [default: stdout]");
  pitch->add_option("--summary", pitch_summary, "JSON summary destination [default: stderr]");
  pitch->add_option("--f0-def", pitch_default, "f0 reported when no frame is voiced (Hz)")
      ->capture_default_str();
  pitch_flags.attach(pitch);

  // extract / fbank
  struct ExtractFlags {
    std::string in, out;
    bool normalize = false;
    double f0_def = kDefaultF0Def;
    std::optional<double> f0_utt;
    double shift_mel = 0.0;
    FeatureFlags features;
    PitchFlags pitch;
  };
  ExtractFlags ex, fb;
  auto attach_extract = [](CLI::App* sub, ExtractFlags& f, bool with_kind) {
    sub->add_option("--in", f.in, "Input WAV (mono, 16-bit, 16 kHz)")->required();
    sub->add_option("--out", f.out, "Write an MWF1 matrix file [default: text to stdout]");
    sub->add_flag("--normalize", f.normalize, "Shift by the detected median f0");
    sub->add_option("--f0-def", f.f0_def, "Default (target) f0 (Hz)")->capture_default_str();
    sub->add_option("--f0-utt", f.f0_utt, "Use this f0 instead of detecting it (implies --normalize)");
    sub->add_option("--shift-mel", f.shift_mel, "Extra perturbation offset (Mel)")
        ->capture_default_str();
    f.features.attach(sub, with_kind);
    f.pitch.attach(sub);
  };
  auto* extract = app.add_subcommand("extract", "Extract MFCC (or log-Mel) features from one file");
  extract->alias("mfcc");
  attach_extract(extract, ex, true);
  auto* fbank = app.add_subcommand("fbank", "Extract log-Mel filterbank energies from one file");
  attach_extract(fbank, fb, false);

  // process
  auto* process = app.add_subcommand("process", "Batch extraction over a JSON-lines manifest");
  std::string manifest_path, archive_out;
  bool proc_normalize = false, strict = false;
  double proc_f0_def = kDefaultF0Def;
  std::string shifts = join_numbers(kDefaultShiftsMel);
  std::optional<std::size_t> workers;
  FeatureFlags proc_features;
  PitchFlags proc_pitch;
  process->add_option("--manifest", manifest_path, "JSON-lines manifest (id, audio, text)")
      ->required();
  process->add_option("--out", archive_out, "Archive directory")->required();
  process->add_flag("--normalize", proc_normalize, "Apply f0 normalization");
  process->add_option("--augment-shifts", shifts, "Perturbation offsets in Mel (must include 0)")
      ->capture_default_str();
  process->add_option("--f0-def", proc_f0_def, "Base default f0 (Hz)")->capture_default_str();
  process->add_option("--workers", workers,
                      std::string("Worker threads [default: $") + kWorkersEnv +
                          " or hardware concurrency]");
  process->add_flag("--strict", strict, "Abort on the first failing utterance");
  proc_features.attach(process, true);
  proc_pitch.attach(process);

  // export-ark
  auto* export_ark = app.add_subcommand("export-ark", "Convert an archive to a Kaldi-style text archive");
  std::string ark_archive, ark_out;
  export_ark->add_option("--archive", ark_archive, "Archive directory")->required();
  export_ark->add_option("--out", ark_out, "Output text file")->required();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Summarize an MWF1 matrix file or an archive directory");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "Matrix file or archive directory")->required();

  // synth-harmonic
  auto* synth_h = app.add_subcommand("synth-harmonic", "Write a band-limited pulse train");
  double sh_f0 = 100.0, sh_duration = 1.0, sh_amplitude = 0.5;
  std::optional<double> sh_snr;
  std::uint64_t sh_seed = 0;
  std::string sh_out;
  synth_h->add_option("--f0", sh_f0, "Fundamental (Hz)")->capture_default_str();
  synth_h->add_option("--duration", sh_duration, "Length (s)")->capture_default_str();
  synth_h->add_option("--amplitude", sh_amplitude, "Peak amplitude")->capture_default_str();
  synth_h->add_option("--snr-db", sh_snr, "Add white noise at this SNR (dB)");
  synth_h->add_option("--seed", sh_seed, "Noise seed")->capture_default_str();
  synth_h->add_option("--out", sh_out, "Output WAV")->required();

  // synth-vowel
  auto* synth_v = app.add_subcommand("synth-vowel", "Write a source-filter vowel");
  VowelSpec vowel;
  std::string sv_formants = join_numbers(vowel.formants);
  std::string sv_bandwidths = join_numbers(vowel.bandwidths);
  std::optional<double> sv_target;
  std::string sv_out;
  synth_v->add_option("--f0", vowel.f0, "Fundamental (Hz)")->capture_default_str();
  synth_v->add_option("--formants", sv_formants, "F1,F2,F3 (Hz)")->capture_default_str();
  synth_v->add_option("--bandwidths", sv_bandwidths, "B1,B2,B3 (Hz)")->capture_default_str();
  synth_v->add_option("--duration", vowel.duration, "Length (s)")->capture_default_str();
  synth_v->add_option("--amplitude", vowel.amplitude, "Peak amplitude")->capture_default_str();
  synth_v->add_option("--shift-to-f0", sv_target,
                      "Re-place the formants for this f0, keeping Mel Fx-f0 distances");
  synth_v->add_option("--out", sv_out, "Output WAV")->required();

  // demo-fig1
  auto* demo = app.add_subcommand("demo-fig1", "Filterbank alignment of an /i/ vowel at two f0 values");
  double demo_ref = 106.0, demo_target = 270.0, demo_def = kDefaultF0Def, demo_duration = 1.0;
  demo->add_option("--f0-ref", demo_ref, "Reference speaker f0 (Hz)")->capture_default_str();
  demo->add_option("--f0-target", demo_target, "Second speaker f0 (Hz)")->capture_default_str();
  demo->add_option("--f0-def", demo_def, "Normalization target (Hz)")->capture_default_str();
  demo->add_option("--duration", demo_duration, "Vowel length (s)")->capture_default_str();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pitch) {
      const PitchConfig pcfg = pitch_flags.resolve();
      const AudioBuffer audio = read_wav(pitch_in);
      const PitchTrack track = detect_pitch(audio, pcfg);
      const UtteranceF0 f0 = median_f0(track, pitch_default);

      std::ofstream csv_file;
      std::ostream& csv = open_or(pitch_csv, csv_file, out);
      csv << "time,f0,periodicity\n";
      for (const PitchFrame& f : track.frames)
        csv << fixed(f.time, 3) << ',' << (f.f0 ? fixed(*f.f0, 3) : "") << ','
            << fixed(f.periodicity, 4) << '\n';

      nlohmann::ordered_json summary;
      summary["source"] = audio.source_id;
      summary["frames"] = track.frames.size();
      summary["voiced_count"] = f0.voiced_count;
      summary["f0_utt"] = f0.f0_utt;
      summary["fallback_used"] = f0.fallback_used;
      std::ofstream summary_file;
      std::ostream& sum = open_or(pitch_summary, summary_file, err);
      sum << summary.dump() << '\n';
      return kExitOk;
    }

    for (auto [sub, flags] : {std::pair{extract, &ex}, std::pair{fbank, &fb}}) {
      if (!*sub) continue;
      const bool normalize = flags->normalize || flags->f0_utt.has_value();
      const bool warped = normalize || flags->shift_mel != 0.0;
      const FeatureConfig cfg = flags->features.resolve(
          warped, sub == fbank ? std::optional(FeatureKind::kLogMel) : std::nullopt);
      const PitchConfig pcfg = flags->pitch.resolve();
      const AugmentationPlan plan = [&] {
        try {
          const double zero_and_shift[] = {0.0, flags->shift_mel};
          return make_plan(flags->f0_def,
                           std::span(zero_and_shift, flags->shift_mel == 0.0 ? 1 : 2));
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }();

      const AudioBuffer audio = read_wav(flags->in);
      UtteranceF0 f0{flags->f0_def, 0, false};
      if (flags->f0_utt) {
        f0.f0_utt = *flags->f0_utt;
      } else if (normalize) {
        f0 = median_f0(detect_pitch(audio, pcfg), flags->f0_def);
      }
      const std::size_t variant = plan.size() - 1;
      const WarpSpec warp = variant_warp(plan, variant, normalize ? f0.f0_utt : plan.base_f0_def);
      const FeatureMatrix m = warped ? extract_features(audio, cfg, warp)
                                     : extract_features(audio, cfg);
      err << "f0warp: " << audio.source_id << ": " << m.frames() << " x " << m.dims()
          << " " << to_string(cfg.kind) << ", f0_utt=" << format_number(warp.f0_utt)
          << (f0.fallback_used ? " (fallback)" : "") << " f0_def=" << format_number(warp.f0_def)
          << " delta=" << fixed(warp.delta_mel, 3) << " Mel"
          << (warp.clamped ? " (clamped)" : "") << " hi_freq=" << format_number(cfg.hi_freq)
          << '\n';
      if (flags->out.empty())
        write_text_matrix(out, variant_key(audio.source_id, plan.shifts_mel[variant]), m.values);
      else
        write_matrix(flags->out, m.values);
      return kExitOk;
    }

    if (*process) {
      ProcessOptions opts;
      opts.normalize = proc_normalize;
      opts.plan = plan_from_flags(proc_f0_def, shifts);
      const bool shifted = opts.plan.size() > 1;
      opts.features = proc_features.resolve(proc_normalize || shifted);
      opts.pitch = proc_pitch.resolve();
      opts.workers = workers ? *workers : default_workers();
      if (opts.workers == 0) throw UsageError("--workers must be positive");
      opts.strict = strict;

      const std::vector<ManifestEntry> manifest = read_manifest(manifest_path);
      err << "f0warp: processing " << manifest.size() << " utterances x "
          << opts.plan.size() << " variants with " << opts.workers << " workers\n";
      const ProcessResult result = process_dataset(manifest, opts, archive_out);
      err << "f0warp: wrote " << result.records.size() << " matrices, "
          << result.failures.size() << " failed utterances\n";
      for (const FailureRecord& f : result.failures)
        err << "f0warp: failed " << f.id << ": " << to_string(f.code) << ": " << f.message << '\n';
      return result.exit_code();
    }

    if (*export_ark) {
      export_text_archive(ark_archive, ark_out);
      return kExitOk;
    }

    if (*inspect) {
      if (fs::is_directory(inspect_path)) {
        const std::vector<ArchiveRecord> records = read_index(inspect_path);
        std::size_t clamped = 0, fallback = 0, frames = 0;
        std::vector<std::string> ids;
        for (const ArchiveRecord& r : records) {
          clamped += r.clamped;
          fallback += r.fallback_used;
          frames += r.rows;
          if (ids.empty() || ids.back() != r.id) ids.push_back(r.id);
        }
        out << "archive " << inspect_path << '\n'
            << "records " << records.size() << '\n'
            << "utterances " << ids.size() << '\n'
            << "frames " << frames << '\n'
            << "clamped " << clamped << '\n'
            << "fallback " << fallback << '\n';
        return kExitOk;
      }
      const Matrix<float> m = read_matrix(inspect_path);
      out << "rows " << m.rows() << "\ncols " << m.cols() << '\n';
      if (m.rows() == 0 || m.cols() == 0) return kExitOk;
      double lo = m.data()[0], hi = m.data()[0], sum = 0.0;
      for (float v : m.data()) {
        lo = std::min<double>(lo, v);
        hi = std::max<double>(hi, v);
        sum += v;
      }
      out << "min " << format_number(lo) << "\nmax " << format_number(hi) << "\nmean "
          << format_number(sum / static_cast<double>(m.data().size())) << '\n';
      out << "column_mean";
      for (std::size_t c = 0; c < m.cols(); ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, c);
        out << ' ' << fixed(acc / static_cast<double>(m.rows()), 6);
      }
      out << '\n';
      return kExitOk;
    }

    if (*synth_h) {
      AudioBuffer audio;
      try {
        audio = synth_harmonic(sh_f0, sh_duration, sh_amplitude);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      if (sh_snr) add_white_noise(audio, *sh_snr, sh_seed);
      write_wav(sh_out, audio);
      return kExitOk;
    }

    if (*synth_v) {
      AudioBuffer audio;
      try {
        const std::vector<double> f = parse_number_list(sv_formants);
        const std::vector<double> b = parse_number_list(sv_bandwidths);
        if (f.size() != 3 || b.size() != 3)
          throw UsageError("--formants and --bandwidths take exactly three values");
        std::copy(f.begin(), f.end(), vowel.formants.begin());
        std::copy(b.begin(), b.end(), vowel.bandwidths.begin());
        const VowelSpec spec = sv_target ? shift_vowel_for_f0(vowel, *sv_target) : vowel;
        audio = synth_vowel(spec);
        err << "f0warp: vowel f0=" << format_number(spec.f0) << " F=("
            << join_numbers(spec.formants) << ") B=(" << join_numbers(spec.bandwidths) << ")\n";
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      write_wav(sv_out, audio);
      return kExitOk;
    }

    if (*demo) {
      VowelSpec ref;
      ref.f0 = demo_ref;
      ref.duration = demo_duration;
      AlignmentReport r;
      try {
        r = vowel_alignment(ref, demo_target, demo_def);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      out << "config: " << alignment_feature_config().num_filters << " log-Mel filters, "
          << format_number(alignment_feature_config().lo_freq) << "-"
          << format_number(alignment_feature_config().hi_freq) << " Hz\n"
          << "detected f0: " << fixed(r.f0_ref, 2) << " Hz and " << fixed(r.f0_target, 2)
          << " Hz, f0_def " << format_number(demo_def) << " Hz\n"
          << "mean frame distance without normalization: " << fixed(r.unnormalized, 4) << '\n'
          << "mean frame distance with normalization:    " << fixed(r.normalized, 4) << '\n'
          << "ratio: " << fixed(r.ratio(), 4) << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "f0warp: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "f0warp: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    err << "f0warp: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace f0warp::cli
