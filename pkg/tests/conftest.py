import numpy as np
import pytest

from hgcn.harmonic import build_integral_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def U():
    return build_integral_matrix(8000, 257)


def clean_speech(f0, rng):
    """Speech-like harmonic clip with a faint (-50 dB) recording floor."""
    from hgcn.synth import add_noise, speech_like

    return add_noise(speech_like(f0, rng), 50, rng)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    from hgcn.audio_io import write_wav
    from hgcn.synth import mixture

    rng = np.random.default_rng(7)
    d = tmp_path_factory.mktemp("corpus")
    for i, f0 in enumerate(rng.uniform(90, 250, 8)):
        _, clean = mixture(clean_speech(f0, rng), 0, rng)
        write_wav(clean, d / f"clip{i}.wav")
    return d


@pytest.fixture(scope="session")
def stats_file(corpus_dir, tmp_path_factory):
    from hgcn.pipeline import run_stats

    path = tmp_path_factory.mktemp("stats") / "stats.csv"
    run_stats(corpus_dir, path)
    return path


@pytest.fixture(scope="session")
def pair_files(tmp_path_factory):
    """Noisy/clean WAVs: 100 Hz speech-like clip plus white noise at 0 dB."""
    from hgcn.audio_io import write_wav
    from hgcn.synth import mixture

    rng = np.random.default_rng(8)
    d = tmp_path_factory.mktemp("pair")
    noisy, clean = mixture(clean_speech(100.0, rng), 0, rng)
    write_wav(noisy, d / "noisy.wav")
    write_wav(clean, d / "clean.wav")
    return d / "noisy.wav", d / "clean.wav"
