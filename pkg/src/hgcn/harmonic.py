"""High-resolution harmonic integral matrix and per-frame pitch picking.

Pitch candidates are indexed in tenths of a hertz: candidate ``c`` stands
for ``c / 10`` Hz.  Only candidates 600..4199 (60.0..419.9 Hz) carry
weights; the lower rows of the matrix stay zero.
"""

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from .common import LOG_FLOOR, ValidationError, require_finite, round_half_away, safe_log

N_CANDIDATES = 4200
FIRST_CANDIDATE = 600
RESOLUTION_HZ = 0.1

# Where the negative (valley) weight of harmonic k goes:
#   "midpoint": halfway between the previous peak bin and this one; odd gaps
#               straddle the midpoint, even gaps hit it exactly.
#   "swapped":  like midpoint but with the parity branches exchanged.
#   "printed":  the literal line ``i = [(index - last_index) / 2]`` with
#               last_index never advanced, so each valley sits at half
#               its own peak bin.
VALLEY_RULES = ("midpoint", "swapped", "printed")

_MAGIC = b"HGCU"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class IntegralMatrix:
    values: np.ndarray
    sr: float
    n_bins: int
    valley_rule: str = "midpoint"
    resolution: float = RESOLUTION_HZ

    def candidate_hz(self, index):
        return np.asarray(index) / 10.0

    def save(self, path):
        rows, cols = self.values.shape
        with open(path, "wb") as fh:
            fh.write(_MAGIC + bytes([_VERSION]))
            fh.write(struct.pack("<III", rows, cols, int(self.sr)))
            fh.write(self.values.astype("<f4").tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            head = fh.read(5)
            if head[:4] != _MAGIC or head[4] != _VERSION:
                raise ValidationError(f"{path}: not an integral matrix file (v{_VERSION})")
            rows, cols, sr = struct.unpack("<III", fh.read(12))
            raw = fh.read()
        if len(raw) != 4 * rows * cols:
            raise ValidationError(f"{path}: expected {rows}x{cols} floats, got {len(raw) // 4}")
        values = np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(rows, cols)
        return cls(values, sr, cols)


def _harmonic_row(candidate, sr, n_bins, valley_rule):
    """Peak and valley (column, weight) lists for one pitch candidate."""
    f0 = candidate / 10.0
    n_harm = round_half_away(sr / f0)
    k = np.arange(1, n_harm + 1)
    peaks = round_half_away(f0 * k * n_bins / sr)
    keep = peaks < n_bins
    k, peaks = k[keep], peaks[keep]
    w = 1.0 / np.sqrt(k)
    if valley_rule == "printed":
        last = np.zeros_like(peaks)
    else:
        last = np.concatenate(([0], peaks[:-1]))
    gap = peaks - last
    odd = gap % 2 == 1
    if valley_rule == "swapped":
        odd = ~odd
    if valley_rule == "printed":
        mid = round_half_away(gap / 2.0)
    else:
        mid = last + gap // 2

    cols = [peaks]
    weights = [w]
    wide = gap > 1
    split = wide & odd
    single = wide & ~odd
    narrow = ~wide
    cols += [mid[split], mid[split] + 1, mid[single], peaks[narrow], last[narrow]]
    weights += [-w[split] / 2, -w[split] / 2, -w[single],
                -w[narrow] / 2, -w[narrow] / 2]
    cols = np.concatenate(cols)
    weights = np.concatenate(weights)
    # "swapped" can push the split pair one past the last bin
    inside = cols < n_bins
    return cols[inside], weights[inside]


def build_integral_matrix(sr=8000, n_bins=257, valley_rule="midpoint"):
    """Build the 4200 x F matrix mapping a log-magnitude frame to significances.

    ``sr`` is the Nyquist frequency (half the sample rate).  For each
    candidate f0 and harmonic k the peak bin ``[f0 k F / sr]`` gains
    ``1/sqrt(k)`` and the valley between it and the previous peak loses the
    same amount.  ``[.]`` rounds half away from zero; harmonics whose peak
    bin falls at or beyond F are skipped.
    """
    if valley_rule not in VALLEY_RULES:
        raise ValidationError(f"valley_rule must be one of {VALLEY_RULES}")
    if sr <= 420:
        raise ValidationError(f"sr must exceed 420 Hz, got {sr}")
    if n_bins < 2:
        raise ValidationError(f"need at least 2 bins, got {n_bins}")
    U = np.zeros((N_CANDIDATES, n_bins))
    for cand in range(FIRST_CANDIDATE, N_CANDIDATES):
        cols, weights = _harmonic_row(cand, sr, n_bins, valley_rule)
        np.add.at(U[cand], cols, weights)
    U.flags.writeable = False
    return IntegralMatrix(U, sr, n_bins, valley_rule)


@dataclass(frozen=True, eq=False)
class SignificanceSpectrum:
    values: np.ndarray


def significance_spectrum(mag, U, floor=LOG_FLOOR):
    mag = np.asarray(mag, dtype=np.float64)
    require_finite("magnitude", mag)
    if np.any(mag < 0):
        raise ValidationError("magnitude must be non-negative")
    if mag.ndim != 2 or mag.shape[1] != U.n_bins:
        raise ValidationError(f"magnitude shape {mag.shape} does not match F={U.n_bins}")
    return SignificanceSpectrum(safe_log(mag, floor) @ U.values.T)


@dataclass(frozen=True, eq=False)
class PitchTrack:
    pitch_hz: np.ndarray
    candidate_index: np.ndarray
    significance: np.ndarray

    def __len__(self):
        return len(self.pitch_hz)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["frame", "pitch_hz", "significance"])
            for t, (p, q) in enumerate(zip(self.pitch_hz, self.significance)):
                writer.writerow([t, f"{p:.1f}", f"{q:.6f}"])


def pick_pitch(Q):
    """Per-frame argmax over candidates 600..4199; ties go to the lowest index."""
    values = Q.values if isinstance(Q, SignificanceSpectrum) else np.asarray(Q)
    require_finite("significance", values)
    band = values[:, FIRST_CANDIDATE:]
    idx = np.argmax(band, axis=1) + FIRST_CANDIDATE
    best = values[np.arange(len(values)), idx]
    return PitchTrack(idx / 10.0, idx.astype(np.int64), best)


def harmonic_raster(track, sr=8000, n_bins=257):
    """Binary T x F raster with ones at ``[p k F / sr]`` for k = 1..floor(sr/p)."""
    pitch = np.asarray(track.pitch_hz if isinstance(track, PitchTrack) else track, float)
    raster = np.zeros((len(pitch), n_bins), dtype=np.uint8)
    for t, p in enumerate(pitch):
        if p <= 0:
            continue
        k = np.arange(1, math.floor(sr / p) + 1)
        bins = round_half_away(p * k * n_bins / sr)
        raster[t, bins[(bins >= 0) & (bins < n_bins)]] = 1
    return raster
