"""Speech energy detection from clean-speech statistics.

Per-bin thresholds ``kappa = mu + eps * sigma`` are derived from the
time-averaged log magnitude of a clean corpus.  Cells above threshold form
the energy labels; the high-threshold raster drives the VAD and VRD frame
decisions.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .common import LOG_FLOOR, ValidationError, require_binary, safe_log

EPS_A = 0.0
EPS_B = 4.0 / 3.0
VAD_COUNT = 24


@dataclass(frozen=True, eq=False)
class EnergyStats:
    mu: np.ndarray
    sigma: np.ndarray
    clip_count: int

    def __post_init__(self):
        if self.clip_count < 1:
            raise ValidationError("clip_count must be at least 1")
        if self.mu.shape != self.sigma.shape:
            raise ValidationError("mu and sigma must have the same length")
        if np.any(self.sigma < 0) or not np.all(np.isfinite(self.mu)):
            raise ValidationError("statistics must be finite with sigma >= 0")

    @property
    def n_bins(self):
        return len(self.mu)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin", "mu", "sigma"])
            for f, (m, s) in enumerate(zip(self.mu, self.sigma)):
                writer.writerow([f, repr(float(m)), repr(float(s))])

    @classmethod
    def from_csv(cls, path, clip_count=1):
        try:
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
        except UnicodeDecodeError as exc:
            raise ValidationError(f"{path}: not a text stats file") from exc
        if not rows or rows[0] != ["bin", "mu", "sigma"]:
            raise ValidationError(f"{path}: missing 'bin,mu,sigma' header")
        try:
            body = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
        except ValueError as exc:
            raise ValidationError(f"{path}: malformed stats row ({exc})") from exc
        if body.ndim != 2 or body.shape[1] != 3 or len(body) == 0:
            raise ValidationError(f"{path}: expected rows of bin,mu,sigma")
        if not np.array_equal(body[:, 0], np.arange(len(body))):
            raise ValidationError(f"{path}: bins must be 0..F-1 in order")
        return cls(body[:, 1], body[:, 2], clip_count)


def clip_mean_log(mag, floor=LOG_FLOOR):
    """Time average of the floored log magnitude, one value per bin."""
    return safe_log(np.asarray(mag, dtype=float), floor).mean(axis=0)


def corpus_stats(clips, floor=LOG_FLOOR, clip_means=None):
    """Mean and population std across clips of each clip's mean log magnitude.

    ``clip_means`` lets callers pass precomputed :func:`clip_mean_log`
    rows (e.g. from a worker pool) instead of magnitude spectrograms.
    """
    if clip_means is None:
        clips = list(clips)
        if not clips:
            raise ValidationError("corpus_stats needs at least one clip")
        widths = {np.shape(c)[1] for c in clips}
        if len(widths) != 1:
            raise ValidationError(f"clips disagree on bin count: {sorted(widths)}")
        clip_means = [clip_mean_log(c, floor) for c in clips]
    m = np.asarray(clip_means, dtype=float)
    if m.ndim != 2 or len(m) == 0:
        raise ValidationError("corpus_stats needs at least one clip")
    mu = m.mean(axis=0)
    sigma = np.sqrt(((m - mu) ** 2).mean(axis=0))
    return EnergyStats(mu, sigma, len(m))


@dataclass(frozen=True, eq=False)
class Thresholds:
    kappa: np.ndarray
    epsilon_offset: float


def make_thresholds(stats, epsilon_offset=EPS_A):
    return Thresholds(stats.mu + epsilon_offset * stats.sigma, epsilon_offset)


def energy_labels(clean_mag, thr, floor=LOG_FLOOR):
    """1 where the floored log magnitude strictly exceeds the bin threshold."""
    clean_mag = np.asarray(clean_mag, dtype=float)
    if clean_mag.ndim != 2 or clean_mag.shape[1] != len(thr.kappa):
        raise ValidationError(
            f"magnitude has {np.shape(clean_mag)[-1]} bins, thresholds have {len(thr.kappa)}")
    if np.any(clean_mag < 0):
        raise ValidationError("magnitude must be non-negative")
    return (safe_log(clean_mag, floor) > thr.kappa).astype(np.uint8)


def vad_track(rb, epsilon_count=VAD_COUNT):
    """Frame is active when more than ``epsilon_count`` cells are open."""
    require_binary("R_B", rb)
    return (np.asarray(rb).sum(axis=1) > epsilon_count).astype(np.uint8)


def vrd_track(rb):
    """Frame is voiced unless the upper half of the bins holds more open cells.

    The lower half is bins [0, F//2), the upper half [F//2, F).
    """
    require_binary("R_B", rb)
    rb = np.asarray(rb, dtype=np.int64)
    half = rb.shape[1] // 2
    low = rb[:, :half].sum(axis=1)
    high = rb[:, half:].sum(axis=1)
    return (high <= low).astype(np.uint8)
