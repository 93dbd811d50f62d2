"""Short-time Fourier analysis/synthesis and power-law compression."""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .audio_io import AudioClip
from .common import SAMPLE_RATE, ValidationError


NORM_FLOOR = 1e-3


def hann(length):
    """Periodic Hann sampled at half-integer points.

    ``w[n] = 0.5 - 0.5 cos(2 pi (n + 1/2) / N)`` is symmetric, strictly
    positive, sums to a constant at hop = N/4, and its DFT is confined to
    bins 0 and +/-1.
    """
    n = np.arange(length) + 0.5
    return 0.5 - 0.5 * np.cos(2 * np.pi * n / length)


@dataclass(frozen=True, eq=False)
class StftConfig:
    fft_size: int = 512
    win_length: int = 512
    hop: int = 128
    window: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        window = hann(self.win_length) if self.window is None else np.asarray(self.window, float)
        object.__setattr__(self, "window", window)
        if not 0 < self.hop <= self.win_length:
            raise ValidationError(
                f"hop={self.hop} must lie in (0, win_length={self.win_length}]")
        if self.fft_size < self.win_length:
            raise ValidationError(
                f"fft_size={self.fft_size} is smaller than win_length={self.win_length}")
        if window.shape != (self.win_length,):
            raise ValidationError(
                f"window has length {window.size}, expected {self.win_length}")
        if not np.allclose(window, window[::-1], rtol=0, atol=1e-12):
            raise ValidationError("window must be symmetric")

    @property
    def n_bins(self):
        return self.fft_size // 2 + 1

    @classmethod
    def quarter_overlap(cls, win_length=512, fft_size=512):
        """Alternate reading of "25% overlap": hop = 3/4 of the window."""
        return cls(fft_size=fft_size, win_length=win_length, hop=3 * win_length // 4)


@dataclass(frozen=True, eq=False)
class ComplexSpectrogram:
    """T x F one-sided spectrum; ``data`` is complex, frames along axis 0."""

    data: np.ndarray
    config: StftConfig = field(default_factory=StftConfig)
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2 or data.shape[1] != self.config.n_bins:
            raise ValidationError(
                f"spectrogram shape {data.shape} does not match F={self.config.n_bins}")
        if not np.all(np.isfinite(data)):
            raise ValidationError("spectrogram contains non-finite values")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_parts(cls, real, imag, config=None, sample_rate=SAMPLE_RATE):
        config = config or StftConfig()
        return cls(np.asarray(real) + 1j * np.asarray(imag), config, sample_rate)

    @property
    def real(self):
        return self.data.real

    @property
    def imag(self):
        return self.data.imag

    @property
    def shape(self):
        return self.data.shape

    @property
    def magnitude(self):
        return np.abs(self.data)

    @property
    def phase(self):
        return phase_of(self.data)

    def replace(self, data):
        return ComplexSpectrogram(data, self.config, self.sample_rate)


def phase_of(z):
    """atan2(imag, real), with 0 wherever the value is exactly zero."""
    z = np.asarray(z)
    return np.where(z == 0, 0.0, np.arctan2(z.imag, z.real))


def frame_count(n_samples, cfg):
    if n_samples < cfg.win_length:
        return 0
    return (n_samples - cfg.win_length) // cfg.hop + 1


def stft_forward(clip, cfg=None):
    """Windowed one-sided DFT of every fully covered frame (no padding)."""
    cfg = cfg or StftConfig()
    x = clip.samples if isinstance(clip, AudioClip) else np.asarray(clip, dtype=float)
    rate = clip.sample_rate if isinstance(clip, AudioClip) else SAMPLE_RATE
    if x.size < cfg.win_length:
        raise ValidationError(
            f"input has {x.size} samples, shorter than one window ({cfg.win_length})")
    frames = sliding_window_view(x, cfg.win_length)[::cfg.hop] * cfg.window
    return ComplexSpectrogram(np.fft.rfft(frames, n=cfg.fft_size, axis=1), cfg, rate)


def istft_inverse(spec):
    """Weighted overlap-add inverse of :func:`stft_forward`.

    Each frame is multiplied by the synthesis window and the sum is divided
    by the overlapped squared window.  Near the clip edges that sum is tiny;
    it is floored at ``NORM_FLOOR`` times its peak so edited spectra cannot
    blow up there.  Fully overlapped samples are never affected.
    """
    cfg = spec.config
    n_frames = spec.shape[0]
    if n_frames == 0:
        return AudioClip(np.zeros(0), spec.sample_rate)
    length = (n_frames - 1) * cfg.hop + cfg.win_length
    frames = np.fft.irfft(spec.data, n=cfg.fft_size, axis=1)[:, :cfg.win_length]
    frames *= cfg.window
    out = np.zeros(length)
    norm = np.zeros(length)
    wsq = cfg.window ** 2
    for t in range(n_frames):
        start = t * cfg.hop
        out[start:start + cfg.win_length] += frames[t]
        norm[start:start + cfg.win_length] += wsq
    if np.any(norm <= 0):
        bad = int(np.argmax(norm <= 0))
        raise ValidationError(f"overlap-add normalizer is zero at sample {bad}")
    return AudioClip(out / np.maximum(norm, NORM_FLOOR * norm.max()), spec.sample_rate)


def power_compress(spec, exponent=0.23):
    """Raise magnitudes to ``exponent`` while keeping the phase."""
    if not 0 < exponent <= 1:
        raise ValidationError(f"exponent must lie in (0, 1], got {exponent}")
    if exponent == 1:
        return spec.replace(spec.data.copy())
    mag = np.abs(spec.data)
    gain = np.zeros_like(mag)
    nz = mag > 0
    gain[nz] = mag[nz] ** (exponent - 1.0)
    return spec.replace(spec.data * gain)
