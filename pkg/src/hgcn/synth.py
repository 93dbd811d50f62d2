"""Synthetic test signals: harmonic complexes and noise mixtures."""

import numpy as np

from .audio_io import AudioClip
from .common import SAMPLE_RATE


def harmonic_complex(f0, duration=1.0, n_harmonics=8, sample_rate=SAMPLE_RATE,
                     amplitude=1.0, rng=None):
    """Sum of ``n_harmonics`` equal-amplitude sinusoids at multiples of f0.

    Harmonics above Nyquist are dropped.  Phases are random when ``rng`` is
    given, zero otherwise.
    """
    t = np.arange(int(round(duration * sample_rate))) / sample_rate
    x = np.zeros_like(t)
    for k in range(1, n_harmonics + 1):
        if k * f0 >= sample_rate / 2:
            break
        phase = rng.uniform(0, 2 * np.pi) if rng is not None else 0.0
        x += amplitude * np.sin(2 * np.pi * k * f0 * t + phase)
    return x


def add_noise(signal, snr_db, rng):
    """Add white Gaussian noise scaled to the requested SNR."""
    noise = rng.standard_normal(len(signal))
    gain = np.sqrt(np.mean(signal ** 2) / (np.mean(noise ** 2) * 10 ** (snr_db / 10)))
    return signal + gain * noise


def normalize(x, peak=0.9):
    return x * (peak / np.max(np.abs(x)))


def noisy_pair(f0, snr_db, rng, duration=1.0, n_harmonics=8, peak=0.5):
    """(noisy, clean) clips with a common scale so both stay inside [-1, 1]."""
    return mixture(harmonic_complex(f0, duration, n_harmonics, rng=rng), snr_db, rng, peak)


def speech_like(f0, rng, duration=1.0, sample_rate=SAMPLE_RATE, top_hz=4000.0,
                syllables=((0.1, 0.35), (0.5, 0.35))):
    """Voiced-speech stand-in: 1/k harmonic complex up to ``top_hz`` shaped
    into syllables (start, length in seconds) separated by silence."""
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    x = np.zeros(n)
    for k in range(1, int(top_hz / f0) + 1):
        x += np.sin(2 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi)) / k
    env = np.zeros(n)
    for start, length in syllables:
        a = int(start * sample_rate)
        m = min(int(length * sample_rate), n - a)
        env[a:a + m] = np.hanning(m) ** 0.3
    return x * env


def mixture(clean, snr_db, rng, peak=0.5):
    """(noisy, clean) clips: white noise at ``snr_db``, jointly scaled to ``peak``."""
    noisy = add_noise(clean, snr_db, rng)
    scale = peak / max(np.max(np.abs(noisy)), np.max(np.abs(clean)))
    return AudioClip(noisy * scale), AudioClip(clean * scale)
