import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgcn.common import ValidationError
from hgcn.metrics import si_sdr


def test_identity_and_scale(rng):
    x = rng.normal(size=1000)
    assert si_sdr(x, x) == 100.0
    assert si_sdr(3 * x, x) == 100.0


def test_orthogonal_is_floor():
    t = np.arange(1600) / 16000
    ref = np.sin(2 * np.pi * 100 * t)
    est = np.cos(2 * np.pi * 100 * t)
    assert si_sdr(est, ref) == -100.0


def test_known_value(rng):
    ref = rng.normal(size=4000)
    ref -= ref.mean()
    noise = rng.normal(size=4000)
    noise -= noise.mean()
    noise -= (noise @ ref) / (ref @ ref) * ref
    noise *= np.linalg.norm(ref) / np.linalg.norm(noise) / np.sqrt(10)
    assert si_sdr(ref + noise, ref) == pytest.approx(10.0, abs=1e-9)


def test_errors():
    with pytest.raises(ValidationError):
        si_sdr(np.ones(3), np.ones(4))
    with pytest.raises(ValidationError):
        si_sdr(np.ones(3), np.full(3, 2.0))


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.01, 100) | st.floats(-100, -0.01), seed=st.integers(0, 2**32 - 1))
def test_scale_invariant(a, seed):
    r = np.random.default_rng(seed)
    ref = r.normal(size=500)
    est = ref + 0.3 * r.normal(size=500)
    assert si_sdr(a * est, ref) == pytest.approx(si_sdr(est, ref), abs=1e-9)


def test_monotone_in_orthogonal_noise(rng):
    ref = rng.normal(size=2000)
    ref -= ref.mean()
    n = rng.normal(size=2000)
    n -= n.mean()
    n -= (n @ ref) / (ref @ ref) * ref
    values = [si_sdr(ref + g * n, ref) for g in (0.01, 0.1, 0.5, 1, 2, 5)]
    assert all(a > b for a, b in zip(values, values[1:]))
