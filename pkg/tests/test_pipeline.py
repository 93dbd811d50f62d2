import filecmp
import json

import numpy as np
import pytest

from hgcn.audio_io import AudioClip, read_wav, write_wav
from hgcn.common import ValidationError
from hgcn.config import PipelineConfig
from hgcn.export import read_pgm
from hgcn.metrics import si_sdr
from hgcn.pipeline import (ANALYZE_OUTPUTS, oracle_gate, oracle_mask, run_analyze,
                           run_oracle_gate, run_stats, scoring_span)
from hgcn.sed import EnergyStats, corpus_stats
from hgcn.stft import istft_inverse, stft_forward


def read_flags(path):
    return np.array([int(line.split(",")[1]) for line in path.read_text().split()[1:]])


def test_stats_constant_tone(tmp_path):
    t = np.arange(16000) / 16000
    (tmp_path / "in").mkdir()
    write_wav(AudioClip(0.5 * np.sin(2 * np.pi * 440 * t)), tmp_path / "in" / "a.wav")
    stats = run_stats(tmp_path / "in", tmp_path / "s.csv")
    assert stats.clip_count == 1
    assert not np.any(EnergyStats.from_csv(tmp_path / "s.csv").sigma)


def test_stats_matches_module_and_is_deterministic(corpus_dir, tmp_path):
    run_stats(corpus_dir, tmp_path / "a.csv")
    run_stats(corpus_dir, tmp_path / "b.csv", jobs=4)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    mags = [stft_forward(read_wav(p)).magnitude for p in sorted(corpus_dir.glob("*.wav"))]
    want = corpus_stats(mags)
    got = EnergyStats.from_csv(tmp_path / "a.csv")
    np.testing.assert_allclose(got.mu, want.mu, rtol=0, atol=1e-9)
    np.testing.assert_allclose(got.sigma, want.sigma, rtol=0, atol=1e-9)


def test_stats_skips_bad_files(corpus_dir, tmp_path, caplog):
    d = tmp_path / "mixed"
    d.mkdir()
    (d / "broken.wav").write_bytes(b"not a wav")
    (d / "good.wav").write_bytes((corpus_dir / "clip0.wav").read_bytes())
    stats = run_stats(d, tmp_path / "s.csv")
    assert stats.clip_count == 1
    assert "broken.wav" in caplog.text


def test_stats_all_bad_or_empty(tmp_path):
    (tmp_path / "e").mkdir()
    with pytest.raises(ValidationError):
        run_stats(tmp_path / "e", tmp_path / "s.csv")
    (tmp_path / "e" / "x.wav").write_bytes(b"junk")
    with pytest.raises(ValidationError, match="skipped"):
        run_stats(tmp_path / "e", tmp_path / "s.csv")


def test_analyze_silent_input(stats_file, tmp_path):
    write_wav(AudioClip(np.zeros(16000)), tmp_path / "silent.wav")
    run_analyze(tmp_path / "silent.wav", stats_file, tmp_path / "out")
    assert not read_flags(tmp_path / "out" / "vad.csv").any()
    assert not read_pgm(tmp_path / "out" / "gate.pgm").any()


def test_analyze_clean_100hz(pair_files, stats_file, tmp_path):
    _, clean = pair_files
    res = run_analyze(clean, stats_file, tmp_path / "out")
    for name in ANALYZE_OUTPUTS:
        assert (tmp_path / "out" / name).exists()
    vad = read_flags(tmp_path / "out" / "vad.csv")
    gate = read_pgm(tmp_path / "out" / "gate.pgm")
    open_rows = gate.any(axis=1)
    assert open_rows.sum() > 40
    assert np.all(vad[open_rows] == 1)
    pitch = res.pitch.pitch_hz[open_rows]
    assert np.mean(np.abs(pitch - 100.0) <= 1.0) >= 0.9


def test_analyze_rerun_identical(pair_files, stats_file, tmp_path):
    noisy, _ = pair_files
    run_analyze(noisy, stats_file, tmp_path / "a", plot=True)
    run_analyze(noisy, stats_file, tmp_path / "b", jobs=4, plot=True)
    names = list(ANALYZE_OUTPUTS) + ["gate_process.png"]
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    assert mismatch == [] and errors == []
    assert (tmp_path / "a" / "gate_process.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_analyze_bin_mismatch(pair_files, stats_file, tmp_path):
    noisy, _ = pair_files
    cfg = PipelineConfig(fft_size=1024)
    with pytest.raises(ValidationError, match="bins"):
        run_analyze(noisy, stats_file, tmp_path / "o", cfg)


def test_oracle_mask_definition():
    clean = np.array([[2.0, 1.0, 5.0, 0.5]])
    noisy = np.array([[1.0, 1.0, 1.0, 1.0]])
    gate = np.array([[1, 1, 1, 0]])
    np.testing.assert_array_equal(oracle_mask(clean, noisy, gate), [[1.0, 0.0, 1.0, 0.0]])


def test_oracle_identical_inputs(pair_files, stats_file):
    _, clean_path = pair_files
    clean = read_wav(clean_path)
    res = oracle_gate(clean, clean, EnergyStats.from_csv(stats_file))
    assert not np.any(res.mask)
    assert res.si_sdr_before == res.si_sdr_after == 100.0


def test_oracle_forced_closed_gate_is_round_trip(pair_files, stats_file):
    noisy, clean = (read_wav(p) for p in pair_files)
    cfg = PipelineConfig(vad_override="zero")
    res = oracle_gate(noisy, clean, EnergyStats.from_csv(stats_file), cfg)
    assert not res.analysis.gate.any()
    round_trip = istft_inverse(stft_forward(noisy)).samples
    assert np.array_equal(res.enhanced.samples, round_trip)
    span = scoring_span(len(round_trip), cfg.stft_config())
    loss = si_sdr(round_trip[span], clean.samples[span]) - si_sdr(noisy.samples[span], clean.samples[span])
    assert abs((res.si_sdr_after - res.si_sdr_before) - loss) <= 0.01
    assert abs(loss) <= 0.01


def test_oracle_improves_noisy_pair(pair_files, stats_file):
    noisy, clean = (read_wav(p) for p in pair_files)
    res = oracle_gate(noisy, clean, EnergyStats.from_csv(stats_file))
    assert res.analysis.gate.sum() > 0
    assert np.all(res.mask[res.analysis.gate == 0] == 0)
    assert res.si_sdr_after > res.si_sdr_before


def test_oracle_length_mismatch(stats_file):
    with pytest.raises(ValidationError, match="length"):
        oracle_gate(AudioClip(np.zeros(2000)), AudioClip(np.zeros(2001)),
                    EnergyStats.from_csv(stats_file))


def test_run_oracle_outputs(pair_files, stats_file, tmp_path):
    noisy, clean = pair_files
    res = run_oracle_gate(noisy, clean, stats_file, tmp_path / "e.wav", tmp_path / "r.json",
                          figure=tmp_path / "o.png")
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["si_sdr_after_db"] == pytest.approx(res.si_sdr_after, abs=1e-6)
    assert report["frames_evaluated"] == res.frames
    assert len(read_wav(tmp_path / "e.wav")) == len(res.enhanced)
    assert (tmp_path / "o.png").stat().st_size > 0
    first = (tmp_path / "e.wav").read_bytes(), (tmp_path / "r.json").read_bytes()
    run_oracle_gate(noisy, clean, stats_file, tmp_path / "e.wav", tmp_path / "r.json")
    assert first == ((tmp_path / "e.wav").read_bytes(), (tmp_path / "r.json").read_bytes())
