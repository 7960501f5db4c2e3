# f0warp/python/tests/test_smoke.py

# Copyright 2026 The f0warp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import os
import subprocess

import numpy as np
import pytest

import f0warp


def mel(hz):
    return 1127.0 * math.log(1.0 + hz / 700.0)


def test_mel_scale():
    assert f0warp.hz_to_mel(1000.0) == pytest.approx(mel(1000.0), rel=1e-13)
    assert f0warp.mel_to_hz(f0warp.hz_to_mel(440.0)) == pytest.approx(440.0)
    with pytest.raises(f0warp.Error, match="DomainError"):
        f0warp.mel_to_hz(-1.0)


def test_default_plan():
    plan = f0warp.make_plan()
    assert len(plan) == 7
    got = sorted(plan.f0_def_values)
    assert got == pytest.approx([58.52, 72.10, 85.93, 100.00, 114.32, 128.90, 143.74], abs=0.02)
    with pytest.raises(f0warp.Error, match="MissingZeroShift"):
        f0warp.make_plan(100.0, [20.0])


def test_pitch_and_features():
    x = f0warp.synth_harmonic(150.0, 1.0, 0.5)
    assert x.dtype == np.float32 and x.shape == (16000,)
    f0_utt, voiced, fallback = f0warp.utterance_f0(x)
    assert abs(f0_utt - 150.0) < 1.0 and voiced > 90 and not fallback
    times, f0, periodicity = f0warp.detect_pitch(x)
    assert len(times) == len(f0) == len(periodicity)

    feats = f0warp.extract_features(x)
    assert feats.shape == (98, 13) and feats.dtype == np.float32

    cfg = f0warp.with_bandwidth_policy(f0warp.FeatureConfig(), True)
    assert cfg.hi_freq == 6200.0
    same = f0warp.extract_features(x, cfg, f0warp.compute_warp(120.0, 120.0))
    np.testing.assert_array_equal(same, f0warp.extract_features(x, cfg))
    cfg.kind = "log-mel"
    assert f0warp.extract_features(x, cfg).shape == (98, 23)


def test_silence_falls_back():
    f0_utt, voiced, fallback = f0warp.utterance_f0(np.zeros(16000, np.float32), 100.0)
    assert (f0_utt, voiced, fallback) == (100.0, 0, True)


def test_io_round_trip(tmp_path):
    m = np.arange(26, dtype=np.float32).reshape(2, 13) / 7
    f0warp.write_matrix(tmp_path / "m.mwf", m)
    np.testing.assert_array_equal(f0warp.read_matrix(tmp_path / "m.mwf"), m)
    x = f0warp.synth_vowel(duration=0.5)
    f0warp.write_wav(tmp_path / "v.wav", x)
    y, sr, source = f0warp.read_wav(tmp_path / "v.wav")
    assert sr == 16000 and source == "v"
    assert np.max(np.abs(y - x)) <= 0.5 / 32768 + 1e-7


def test_alignment_demo():
    r = f0warp.vowel_alignment()
    assert r["ratio"] < 0.8


def test_process_dataset(tmp_path):
    for i, f0 in enumerate((110.0, 190.0)):
        f0warp.write_wav(tmp_path / f"u{i}.wav", f0warp.synth_harmonic(f0, 0.5))
    (tmp_path / "m.jsonl").write_text(
        "".join(json.dumps({"id": f"u{i}", "audio": f"u{i}.wav"}) + "\n" for i in range(2)))
    records, failures = f0warp.process_dataset(tmp_path / "m.jsonl", tmp_path / "out",
                                               normalize=True, workers=2)
    assert len(records) == 14 and failures == []
    lines = (tmp_path / "out" / "index.jsonl").read_text().splitlines()
    assert [json.loads(l)["id"] for l in lines] == [r["id"] for r in records]


@pytest.mark.skipif("F0WARP_CLI" not in os.environ, reason="CLI binary not built")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["F0WARP_CLI"]
    assert subprocess.run([cli, "--help"], capture_output=True).returncode == 0
    assert subprocess.run([cli, "extract"], capture_output=True).returncode == 64
    bad = subprocess.run([cli, "extract", "--in", str(tmp_path / "nope.wav")],
                         capture_output=True, text=True)
    assert bad.returncode == 1 and "IoError" in bad.stderr
