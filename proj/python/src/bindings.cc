// f0warp/python/bindings.cc

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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "f0warp/audio_io.h"
#include "f0warp/augment.h"
#include "f0warp/features.h"
#include "f0warp/matrix_io.h"
#include "f0warp/mel.h"
#include "f0warp/pipeline.h"
#include "f0warp/pitch.h"
#include "f0warp/synth.h"

namespace py = pybind11;
using namespace f0warp;

namespace {

py::array_t<float> to_numpy(const Matrix<float>& m) {
  py::array_t<float> a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(m.rows()),
                                                static_cast<py::ssize_t>(m.cols())});
  if (!m.data().empty())
    std::memcpy(a.mutable_data(), m.data().data(), m.data().size() * sizeof(float));
  return a;
}

Matrix<float> from_numpy(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  Matrix<float> m(a.shape(0), a.shape(1));
  if (a.size() > 0) std::memcpy(m.data().data(), a.data(), a.size() * sizeof(float));
  return m;
}

AudioBuffer make_buffer(const py::array_t<float, py::array::c_style | py::array::forcecast>& s,
                        int sample_rate, const std::string& source_id) {
  if (s.ndim() != 1) throw py::value_error("expected 1-D samples");
  AudioBuffer b;
  b.samples.assign(s.data(), s.data() + s.size());
  b.sample_rate = sample_rate;
  b.source_id = source_id;
  return b;
}

py::array_t<float> samples_of(const AudioBuffer& b) {
  py::array_t<float> a(static_cast<py::ssize_t>(b.samples.size()));
  if (!b.samples.empty())
    std::memcpy(a.mutable_data(), b.samples.data(), b.samples.size() * sizeof(float));
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "f0-based Mel-domain normalization and augmentation";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });
  m.attr("SAMPLE_RATE") = kSampleRate;
  m.attr("MAX_SHIFT_MEL") = kMaxShiftMel;
  m.attr("DEFAULT_F0_DEF") = kDefaultF0Def;

  m.def("hz_to_mel", &hz_to_mel, py::arg("hz"));
  m.def("mel_to_hz", &mel_to_hz, py::arg("mel"));

  py::class_<WarpSpec>(m, "WarpSpec")
      .def_readonly("f0_utt", &WarpSpec::f0_utt)
      .def_readonly("f0_def", &WarpSpec::f0_def)
      .def_readonly("raw_delta_mel", &WarpSpec::raw_delta_mel)
      .def_readonly("delta_mel", &WarpSpec::delta_mel)
      .def_readonly("clamped", &WarpSpec::clamped)
      .def("is_identity", &WarpSpec::is_identity);
  m.def("compute_warp", &compute_warp, py::arg("f0_utt"), py::arg("f0_def"));

  py::class_<FeatureConfig>(m, "FeatureConfig")
      .def(py::init<>())
      .def_readwrite("window", &FeatureConfig::window)
      .def_readwrite("hop", &FeatureConfig::hop)
      .def_readwrite("dft_size", &FeatureConfig::dft_size)
      .def_readwrite("num_filters", &FeatureConfig::num_filters)
      .def_readwrite("lo_freq", &FeatureConfig::lo_freq)
      .def_readwrite("hi_freq", &FeatureConfig::hi_freq)
      .def_readwrite("num_ceps", &FeatureConfig::num_ceps)
      .def_readwrite("preemphasis", &FeatureConfig::preemphasis)
      .def_readwrite("log_floor", &FeatureConfig::log_floor)
      .def_property(
          "kind", [](const FeatureConfig& c) { return std::string(to_string(c.kind)); },
          [](FeatureConfig& c, const std::string& k) {
            auto kind = parse_feature_kind(k);
            if (!kind) throw py::value_error("unknown feature kind '" + k + "'");
            c.kind = *kind;
          })
      .def("dims", &FeatureConfig::dims)
      .def("validate", &FeatureConfig::validate, py::arg("sample_rate") = kSampleRate)
      .def("fingerprint", &FeatureConfig::fingerprint);
  m.def("with_bandwidth_policy", &with_bandwidth_policy, py::arg("config"), py::arg("warped"));

  m.def("read_wav", [](const std::filesystem::path& p) {
    const AudioBuffer b = read_wav(p);
    return py::make_tuple(samples_of(b), b.sample_rate, b.source_id);
  });
  m.def(
      "write_wav",
      [](const std::filesystem::path& p, py::array_t<float, py::array::c_style | py::array::forcecast> s,
         int sr) { write_wav(p, make_buffer(s, sr, "")); },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate") = kSampleRate);

  py::class_<PitchConfig>(m, "PitchConfig")
      .def(py::init<>())
      .def_readwrite("f0_min", &PitchConfig::f0_min)
      .def_readwrite("f0_max", &PitchConfig::f0_max)
      .def_readwrite("voicing_threshold", &PitchConfig::voicing_threshold)
      .def_readwrite("window", &PitchConfig::window)
      .def_readwrite("shift", &PitchConfig::shift);

  // Returns (times, f0 with NaN for unvoiced frames, periodicity).
  m.def(
      "detect_pitch",
      [](py::array_t<float, py::array::c_style | py::array::forcecast> s, const PitchConfig& cfg,
         int sr) {
        const PitchTrack t = detect_pitch(make_buffer(s, sr, ""), cfg);
        std::vector<double> times, f0, per;
        for (const PitchFrame& f : t.frames) {
          times.push_back(f.time);
          f0.push_back(f.f0 ? *f.f0 : std::numeric_limits<double>::quiet_NaN());
          per.push_back(f.periodicity);
        }
        return py::make_tuple(py::array(py::cast(times)), py::array(py::cast(f0)),
                              py::array(py::cast(per)));
      },
      py::arg("samples"), py::arg("config") = PitchConfig{}, py::arg("sample_rate") = kSampleRate);
  // Returns (f0_utt, voiced_count, fallback_used).
  m.def(
      "utterance_f0",
      [](py::array_t<float, py::array::c_style | py::array::forcecast> s, double default_f0,
         const PitchConfig& cfg, int sr) {
        const UtteranceF0 u = median_f0(detect_pitch(make_buffer(s, sr, ""), cfg), default_f0);
        return py::make_tuple(u.f0_utt, u.voiced_count, u.fallback_used);
      },
      py::arg("samples"), py::arg("default_f0") = kDefaultF0Def,
      py::arg("config") = PitchConfig{}, py::arg("sample_rate") = kSampleRate);

  py::class_<AugmentationPlan>(m, "AugmentationPlan")
      .def_readonly("base_f0_def", &AugmentationPlan::base_f0_def)
      .def_readonly("shifts_mel", &AugmentationPlan::shifts_mel)
      .def_readonly("f0_def_values", &AugmentationPlan::f0_def_values)
      .def("__len__", &AugmentationPlan::size);
  m.def(
      "make_plan",
      [](double base, std::optional<std::vector<double>> shifts) {
        return shifts ? make_plan(base, *shifts) : make_plan(base);
      },
      py::arg("base_f0_def") = kDefaultF0Def, py::arg("shifts_mel") = py::none());

  m.def(
      "extract_features",
      [](py::array_t<float, py::array::c_style | py::array::forcecast> s, const FeatureConfig& cfg,
         std::optional<WarpSpec> warp, int sr) {
        const AudioBuffer b = make_buffer(s, sr, "");
        return to_numpy(warp ? extract_features(b, cfg, *warp).values
                             : extract_features(b, cfg).values);
      },
      py::arg("samples"), py::arg("config") = FeatureConfig{}, py::arg("warp") = py::none(),
      py::arg("sample_rate") = kSampleRate);

  m.def(
      "synth_harmonic",
      [](double f0, double duration, double amplitude) {
        return samples_of(synth_harmonic(f0, duration, amplitude));
      },
      py::arg("f0"), py::arg("duration") = 1.0, py::arg("amplitude") = 0.5);
  m.def(
      "synth_vowel",
      [](double f0, std::array<double, 3> formants, std::array<double, 3> bandwidths,
         double duration, double amplitude) {
        VowelSpec v;
        v.f0 = f0;
        v.formants = formants;
        v.bandwidths = bandwidths;
        v.duration = duration;
        v.amplitude = amplitude;
        return samples_of(synth_vowel(v));
      },
      py::arg("f0") = 106.0, py::arg("formants") = VowelSpec{}.formants,
      py::arg("bandwidths") = VowelSpec{}.bandwidths, py::arg("duration") = 1.0,
      py::arg("amplitude") = 0.8);
  m.def(
      "vowel_alignment",
      [](double f0_ref, double f0_target, double f0_def) {
        VowelSpec ref;
        ref.f0 = f0_ref;
        const AlignmentReport r = vowel_alignment(ref, f0_target, f0_def);
        py::dict d;
        d["f0_ref"] = r.f0_ref;
        d["f0_target"] = r.f0_target;
        d["unnormalized"] = r.unnormalized;
        d["normalized"] = r.normalized;
        d["ratio"] = r.ratio();
        return d;
      },
      py::arg("f0_ref") = 106.0, py::arg("f0_target") = 270.0, py::arg("f0_def") = 100.0);

  m.def("read_matrix", [](const std::filesystem::path& p) { return to_numpy(read_matrix(p)); });
  m.def(
      "write_matrix",
      [](const std::filesystem::path& p,
         py::array_t<float, py::array::c_style | py::array::forcecast> a) {
        write_matrix(p, from_numpy(a));
      },
      py::arg("path"), py::arg("matrix"));

  // Returns (records as dicts, failures as (id, code, message)).
  m.def(
      "process_dataset",
      [](const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
         bool normalize, std::optional<std::vector<double>> shifts, std::size_t workers) {
        ProcessOptions opt;
        opt.normalize = normalize;
        if (shifts) opt.plan = make_plan(kDefaultF0Def, *shifts);
        opt.workers = workers;
        ProcessResult r;
        const auto entries = read_manifest(manifest);
        {
          py::gil_scoped_release release;
          r = process_dataset(entries, opt, out_dir);
        }
        py::list records, failures;
        for (const ArchiveRecord& a : r.records) {
          py::dict d;
          d["id"] = a.id;
          d["shift_mel"] = a.shift_mel;
          d["f0_utt"] = a.f0_utt;
          d["f0_def"] = a.f0_def;
          d["delta_mel"] = a.delta_mel;
          d["clamped"] = a.clamped;
          d["fallback_used"] = a.fallback_used;
          d["rows"] = a.rows;
          d["cols"] = a.cols;
          d["path"] = a.path;
          records.append(d);
        }
        for (const FailureRecord& f : r.failures)
          failures.append(py::make_tuple(f.id, std::string(to_string(f.code)), f.message));
        return py::make_tuple(records, failures);
      },
      py::arg("manifest"), py::arg("out_dir"), py::arg("normalize") = false,
      py::arg("shifts_mel") = py::none(), py::arg("workers") = 1);
}
