"""Mono 16-bit PCM WAV reading and writing."""

import wave
from dataclasses import dataclass

import numpy as np

from .common import SAMPLE_RATE, ValidationError

_SCALE = 32768.0


class WavFormatError(ValidationError):
    """The file is not a 16 kHz / 16-bit / mono PCM WAV."""


@dataclass(frozen=True, eq=False)
class AudioClip:
    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValidationError("samples must be one-dimensional")
        if self.sample_rate <= 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples contain non-finite values")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    @property
    def duration(self):
        return len(self.samples) / self.sample_rate


def read_wav(path):
    """Read a mono 16-bit PCM WAV file into an :class:`AudioClip`.

    Samples are scaled by 1/32768 so that -32768 maps exactly to -1.0.
    """
    try:
        wf = wave.open(str(path), "rb")
    except wave.Error as exc:
        # the stdlib reports non-PCM format tags as "unknown format: N"
        raise WavFormatError(f"{path}: unsupported format tag ({exc})") from exc
    except EOFError as exc:
        raise WavFormatError(f"{path}: truncated RIFF header") from exc
    with wf:
        if wf.getnchannels() != 1:
            raise WavFormatError(f"{path}: channels={wf.getnchannels()}, expected 1")
        if wf.getsampwidth() != 2:
            raise WavFormatError(
                f"{path}: sample width={8 * wf.getsampwidth()} bits, expected 16")
        if wf.getframerate() != SAMPLE_RATE:
            raise WavFormatError(
                f"{path}: sample_rate={wf.getframerate()}, expected {SAMPLE_RATE}")
        raw = wf.readframes(wf.getnframes())
        rate = wf.getframerate()
    ints = np.frombuffer(raw, dtype="<i2")
    return AudioClip(ints.astype(np.float64) / _SCALE, rate)


def quantize(samples):
    """Clamp to [-1, 1 - 1/32768] and convert to int16."""
    clipped = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0 - 1.0 / _SCALE)
    return np.round(clipped * _SCALE).astype("<i2")


def write_wav(clip, path):
    data = quantize(clip.samples)
    with open(path, "wb") as fh, wave.open(fh, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(clip.sample_rate)
        wf.writeframes(data.tobytes())
