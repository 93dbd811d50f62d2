"""End-to-end runners behind the CLI: corpus statistics, gate analysis and
the oracle-gate enhancement demo."""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import export
from .audio_io import AudioClip, read_wav, write_wav
from .common import ValidationError
from .config import PipelineConfig
from .gate import GateInputs, compose_gate
from .harmonic import (PitchTrack, SignificanceSpectrum, build_integral_matrix,
                       harmonic_raster, pick_pitch, significance_spectrum)
from .masking import MagnitudeMask, mask_apply_m
from .metrics import si_sdr
from .sed import (EnergyStats, clip_mean_log, corpus_stats, energy_labels,
                  make_thresholds, vad_track, vrd_track)
from .stft import istft_inverse, stft_forward

log = logging.getLogger(__name__)

# frames per significance block; fixed so results never depend on --jobs
CHUNK_FRAMES = 256


@lru_cache(maxsize=8)
def integral_matrix(sr, n_bins, valley_rule):
    return build_integral_matrix(sr, n_bins, valley_rule)


def _nyquist(clip):
    return clip.sample_rate / 2


def significance(mag, U, floor, jobs=1):
    chunks = [mag[i:i + CHUNK_FRAMES] for i in range(0, len(mag), CHUNK_FRAMES)]
    if not chunks:
        return SignificanceSpectrum(np.zeros((0, U.values.shape[0])))
    work = lambda m: significance_spectrum(m, U, floor).values  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return SignificanceSpectrum(np.concatenate(parts))


@dataclass
class GateAnalysis:
    """Every intermediate of the gate computation for one magnitude input."""

    magnitude: np.ndarray
    pitch: PitchTrack
    r_h: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray
    vad: np.ndarray
    vrd: np.ndarray
    gate: np.ndarray


def analyze_magnitude(mag, stats, cfg, sr, jobs=1):
    if stats.n_bins != mag.shape[1]:
        raise ValidationError(
            f"stats have {stats.n_bins} bins, spectrogram has {mag.shape[1]}")
    U = integral_matrix(sr, mag.shape[1], cfg.valley_rule)
    track = pick_pitch(significance(mag, U, cfg.log_floor, jobs))
    r_h = harmonic_raster(track, sr, mag.shape[1])
    r_a = energy_labels(mag, make_thresholds(stats, cfg.eps_a), cfg.log_floor)
    r_b = energy_labels(mag, make_thresholds(stats, cfg.eps_b), cfg.log_floor)
    vad = vad_track(r_b, cfg.vad_count)
    if cfg.vad_override == "zero":
        vad = np.zeros_like(vad)
    elif cfg.vad_override == "one":
        vad = np.ones_like(vad)
    vrd = vrd_track(r_b)
    gate = compose_gate(GateInputs(vad, vrd, r_a, r_h))
    return GateAnalysis(mag, track, r_h, r_a, r_b, vad, vrd, gate)


def _wav_files(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    return sorted(p for p in directory.iterdir() if p.suffix.lower() == ".wav")


def run_stats(directory, out_path, cfg=None, jobs=1):
    """Per-bin log-magnitude statistics over every readable WAV in a directory."""
    cfg = cfg or PipelineConfig()
    stft_cfg = cfg.stft_config()
    files = _wav_files(directory)
    if not files:
        raise ValidationError(f"no .wav files in {directory}")

    def one(path):
        try:
            spec = stft_forward(read_wav(path), stft_cfg)
        except (OSError, ValidationError) as exc:
            log.warning("skipping %s: %s", path, exc)
            return None
        return clip_mean_log(spec.magnitude, cfg.log_floor)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            means = list(pool.map(one, files))
    else:
        means = [one(p) for p in files]
    means = [m for m in means if m is not None]
    if not means:
        raise ValidationError(f"every file in {directory} was skipped")
    stats = corpus_stats(None, cfg.log_floor, clip_means=means)
    stats.to_csv(out_path)
    return stats


ANALYZE_OUTPUTS = ("pitch.csv", "rh.pgm", "ra.pgm", "rb.pgm", "vad.csv", "vrd.csv", "gate.pgm")


def run_analyze(wav_path, stats_path, outdir, cfg=None, jobs=1, plot=False):
    """Write the gate-pipeline panels for one input file into ``outdir``."""
    cfg = cfg or PipelineConfig()
    clip = read_wav(wav_path)
    stats = EnergyStats.from_csv(stats_path)
    spec = stft_forward(clip, cfg.stft_config())
    result = analyze_magnitude(spec.magnitude, stats, cfg, _nyquist(clip), jobs)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    result.pitch.to_csv(outdir / "pitch.csv")
    export.write_pgm(outdir / "rh.pgm", result.r_h)
    export.write_pgm(outdir / "ra.pgm", result.r_a)
    export.write_pgm(outdir / "rb.pgm", result.r_b)
    export.write_flags_csv(outdir / "vad.csv", result.vad, "vad")
    export.write_flags_csv(outdir / "vrd.csv", result.vrd, "vrd")
    export.write_pgm(outdir / "gate.pgm", result.gate)
    if plot:
        from .plotting import plot_gate_process
        plot_gate_process(outdir / "gate_process.png", result, spec.config.hop / clip.sample_rate,
                          clip.sample_rate)
    return result


def oracle_mask(clean_mag, noisy_mag, gate):
    """clamp(|clean| / |noisy| - 1, 0, 1) on open gate cells, 0 elsewhere."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(noisy_mag > 0, clean_mag / noisy_mag, 1.0)
    return np.where(gate > 0, np.clip(ratio - 1.0, 0.0, 1.0), 0.0)


def scoring_span(n_samples, stft_cfg):
    """Samples covered by every overlapping frame; the clip edges, where
    overlap-add is only partially normalized, are left out of the scores."""
    edge = stft_cfg.win_length - stft_cfg.hop
    if n_samples <= 2 * edge:
        return slice(0, n_samples)
    return slice(edge, n_samples - edge)


@dataclass
class OracleResult:
    enhanced: AudioClip
    mask: np.ndarray
    analysis: GateAnalysis
    si_sdr_before: float
    si_sdr_after: float
    frames: int

    def report(self):
        return {
            "si_sdr_before_db": round(self.si_sdr_before, 6),
            "si_sdr_after_db": round(self.si_sdr_after, 6),
            "si_sdr_delta_db": round(self.si_sdr_after - self.si_sdr_before, 6),
            "frames_evaluated": self.frames,
            "gate_open_cells": int(self.analysis.gate.sum()),
            "compensated_cells": int(np.count_nonzero(self.mask)),
        }


def oracle_gate(noisy, clean, stats, cfg=None):
    """Gate from the clean reference, ideal compensation mask, Mask Apply M."""
    cfg = cfg or PipelineConfig()
    if len(noisy) != len(clean):
        raise ValidationError(f"length mismatch: noisy {len(noisy)}, clean {len(clean)}")
    stft_cfg = cfg.stft_config()
    noisy_spec = stft_forward(noisy, stft_cfg)
    clean_spec = stft_forward(clean, stft_cfg)
    analysis = analyze_magnitude(clean_spec.magnitude, stats, cfg, _nyquist(clean))
    mask = oracle_mask(clean_spec.magnitude, noisy_spec.magnitude, analysis.gate)
    enhanced = istft_inverse(mask_apply_m(noisy_spec, MagnitudeMask(mask)))
    span = scoring_span(len(enhanced), stft_cfg)
    reference = clean.samples[span]
    before = si_sdr(noisy.samples[span], reference)
    after = si_sdr(enhanced.samples[span], reference)
    return OracleResult(enhanced, mask, analysis, before, after, noisy_spec.shape[0])


def run_oracle_gate(noisy_path, clean_path, stats_path, out_wav, report_path,
                    cfg=None, figure=None):
    cfg = cfg or PipelineConfig()
    noisy = read_wav(noisy_path)
    clean = read_wav(clean_path)
    stats = EnergyStats.from_csv(stats_path)
    result = oracle_gate(noisy, clean, stats, cfg)
    write_wav(result.enhanced, out_wav)
    with open(report_path, "w") as fh:
        json.dump(result.report(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    if figure:
        from .plotting import plot_oracle
        plot_oracle(figure, noisy, clean, result, cfg.stft_config())
    return result
