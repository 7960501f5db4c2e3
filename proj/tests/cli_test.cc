// f0warp/tests/cli_test.cc

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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "f0warp/audio_io.h"
#include "f0warp/cli.h"
#include "f0warp/pipeline.h"
#include "f0warp/synth.h"
#include "support/oracles.h"

using namespace f0warp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "f0warp");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Set F0WARP_UPDATE_GOLDEN=1 to rewrite the expected files.
void check_golden(const std::string& name, const std::string& actual) {
  const fs::path path = fs::path(F0WARP_GOLDEN_DIR) / name;
  if (std::getenv("F0WARP_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path);
  CHECK_MESSAGE(slurp(path) == actual, "help text drifted from " << path);
}

}  // namespace

TEST_CASE("--help output is stable") {
  const Run top = run({"--help"});
  CHECK(top.code == cli::kExitOk);
  check_golden("help.txt", top.out);
  for (const char* sub : {"pitch", "extract", "fbank", "process", "export-ark", "inspect",
                          "synth-harmonic", "synth-vowel", "demo-fig1"}) {
    CAPTURE(sub);
    const Run r = run({sub, "--help"});
    CHECK(r.code == cli::kExitOk);
    check_golden(std::string("help_") + sub + ".txt", r.out);
  }
}

TEST_CASE("help shows the library defaults") {
  const std::string h = run({"extract", "--help"}).out;
  CHECK(h.find("--num-filters INT [23]") != std::string::npos);
  CHECK(h.find("--num-ceps INT [13]") != std::string::npos);
  CHECK(h.find("--window FLOAT [0.025]") != std::string::npos);
  CHECK(h.find("--f0-def FLOAT [100]") != std::string::npos);
  const std::string p = run({"process", "--help"}).out;
  CHECK(p.find("[0,20,-20,40,-40,60,-60]") != std::string::npos);
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"extract"}).code == cli::kExitUsage);
  CHECK(run({"extract", "--in", "a.wav", "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"extract", "--in", "a.wav", "--kind", "plp"}).code == cli::kExitUsage);
  const Run conflict = run({"extract", "--in", "a.wav", "--normalize", "--hi-freq", "8000"});
  CHECK(conflict.code == cli::kExitUsage);
  CHECK(conflict.err.find("6200") != std::string::npos);
  CHECK(run({"extract", "--in", "a.wav", "--dft-size", "500"}).code == cli::kExitUsage);
  CHECK(run({"process", "--manifest", "m", "--out", "o", "--augment-shifts", "20,-20"}).code ==
        cli::kExitUsage);
  CHECK(run({"process", "--manifest", "m", "--out", "o", "--augment-shifts", "0,x"}).code ==
        cli::kExitUsage);
  CHECK(run({"synth-vowel", "--f0", "400", "--out", "v.wav"}).code == cli::kExitUsage);
}

TEST_CASE("runtime failures exit 1") {
  const Run r = run({"extract", "--in", "/nonexistent/x.wav"});
  CHECK(r.code == cli::kExitFatal);
  CHECK(r.err.find("IoError") != std::string::npos);
  CHECK(run({"inspect", "/nonexistent/x.mwf"}).code == cli::kExitFatal);
}

TEST_CASE("pitch on silence reports fallback") {
  const fs::path dir = oracle::temp_dir("cli_pitch");
  AudioBuffer s;
  s.sample_rate = kSampleRate;
  s.samples.assign(16000, 0.0f);
  write_wav(dir / "sil.wav", s);
  const Run r = run({"pitch", "--in", (dir / "sil.wav").string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("time,f0,periodicity\n", 0) == 0);
  CHECK(r.err.find("\"voiced_count\":0") != std::string::npos);
  CHECK(r.err.find("\"fallback_used\":true") != std::string::npos);
}

TEST_CASE("extract --normalize uses the detected f0 and a 6.2 kHz filterbank") {
  const fs::path dir = oracle::temp_dir("cli_extract");
  REQUIRE(run({"synth-harmonic", "--f0", "180", "--out", (dir / "a.wav").string()}).code == 0);
  const Run r = run({"extract", "--in", (dir / "a.wav").string(), "--normalize", "--out",
                     (dir / "a.mwf").string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("hi_freq=6200") != std::string::npos);
  const auto m = oracle::read_mwf(dir / "a.mwf");
  CHECK(m.rows == 98);
  CHECK(m.cols == 13);

  const Run text = run({"fbank", "--in", (dir / "a.wav").string()});
  CHECK(text.code == 0);
  CHECK(text.err.find("hi_freq=8000") != std::string::npos);
  const fs::path ark = dir / "a.txt";
  std::ofstream(ark) << text.out;
  const auto parsed = oracle::read_text_archive(ark);
  REQUIRE(parsed.count("a_shift+0") == 1);
  CHECK(parsed.at("a_shift+0").size() == 98);
  CHECK(parsed.at("a_shift+0")[0].size() == 23);
}

TEST_CASE("process fans out, honours the worker env and exports") {
  const fs::path dir = oracle::temp_dir("cli_process");
  {
    std::ofstream m(dir / "m.jsonl");
    for (int i = 0; i < 2; ++i) {
      const std::string wav = (dir / ("u" + std::to_string(i) + ".wav")).string();
      REQUIRE(run({"synth-harmonic", "--f0", std::to_string(100 + 50 * i), "--duration", "0.3",
                   "--out", wav}).code == 0);
      m << "{\"id\":\"u" << i << "\",\"audio\":\"u" << i << ".wav\"}\n";
    }
    m << "{\"id\":\"gone\",\"audio\":\"gone.wav\"}\n";
  }
  ::setenv(cli::kWorkersEnv, "3", 1);
  const Run r = run({"process", "--manifest", (dir / "m.jsonl").string(), "--normalize",
                     "--augment-shifts", "0,20,-20,40,-40,60,-60", "--out",
                     (dir / "out").string()});
  ::unsetenv(cli::kWorkersEnv);
  CHECK(r.code == cli::kExitPartial);
  CHECK(r.err.find("with 3 workers") != std::string::npos);
  CHECK(read_index(dir / "out").size() == 14);

  const Run ins = run({"inspect", (dir / "out").string()});
  CHECK(ins.out.find("records 14") != std::string::npos);
  CHECK(run({"export-ark", "--archive", (dir / "out").string(), "--out",
             (dir / "x.ark").string()}).code == 0);
  CHECK(oracle::read_text_archive(dir / "x.ark").size() == 14);

  ::setenv(cli::kWorkersEnv, "zero", 1);
  CHECK(run({"process", "--manifest", (dir / "m.jsonl").string(), "--out",
             (dir / "o2").string()}).code == cli::kExitUsage);
  ::unsetenv(cli::kWorkersEnv);
}

TEST_CASE("synthesis and demo subcommands") {
  const fs::path dir = oracle::temp_dir("cli_synth");
  const Run v = run({"synth-vowel", "--shift-to-f0", "270", "--out", (dir / "v.wav").string()});
  CHECK(v.code == 0);
  CHECK(read_wav(dir / "v.wav").samples.size() == 16000);
  const Run d = run({"demo-fig1"});
  CHECK(d.code == 0);
  CHECK(d.out.find("ratio: 0.") != std::string::npos);
}

TEST_CASE("parse_number_list") {
  CHECK(cli::parse_number_list("0, +20,-20") == std::vector<double>{0, 20, -20});
  CHECK_THROWS_AS(cli::parse_number_list(""), Error);
  CHECK_THROWS_AS(cli::parse_number_list("1,,2"), Error);
  CHECK_THROWS_AS(cli::parse_number_list("1,abc"), Error);
}
