import cmath
import math

import numpy as np
import pytest

from hgcn.common import ValidationError
from hgcn.masking import ComplexMask, MagnitudeMask, mask_apply_e, mask_apply_m
from hgcn.stft import ComplexSpectrogram


def random_spec(rng, T=6):
    return ComplexSpectrogram(rng.normal(size=(T, 257)) + 1j * rng.normal(size=(T, 257)))


def scalar_e(s, m):
    ps = 0.0 if s == 0 else math.atan2(s.imag, s.real)
    pm = 0.0 if m == 0 else math.atan2(m.imag, m.real)
    return abs(s) * math.tanh(abs(m)) * cmath.exp(1j * (ps + pm))


def test_zero_mask_e(rng):
    spec = random_spec(rng)
    out = mask_apply_e(spec, ComplexMask(np.zeros(spec.shape), np.zeros(spec.shape)))
    assert not np.any(out.data)


def test_saturated_real_mask_e(rng):
    spec = random_spec(rng)
    out = mask_apply_e(spec, ComplexMask(np.full(spec.shape, 100.0), np.zeros(spec.shape)))
    np.testing.assert_allclose(np.abs(out.data), np.abs(spec.data), rtol=1e-8)
    np.testing.assert_allclose(np.angle(out.data), np.angle(spec.data), atol=1e-12)


def test_e_matches_scalar_oracle(rng):
    spec = random_spec(rng, 3)
    mask = ComplexMask(rng.normal(size=spec.shape), rng.normal(size=spec.shape))
    out = mask_apply_e(spec, mask).data
    for t in range(3):
        for f in range(257):
            want = scalar_e(spec.data[t, f], complex(mask.real[t, f], mask.imag[t, f]))
            assert abs(out[t, f] - want) <= 1e-9


def test_e_bounded_by_input(rng):
    spec = random_spec(rng)
    mask = ComplexMask(rng.normal(size=spec.shape) * 5, rng.normal(size=spec.shape) * 5)
    assert np.all(np.abs(mask_apply_e(spec, mask).data) <= np.abs(spec.data) * (1 + 1e-12))


def test_e_custom_activation(rng):
    spec = random_spec(rng)
    mask = ComplexMask(np.ones(spec.shape), np.zeros(spec.shape))
    out = mask_apply_e(spec, mask, activation=lambda m: 0.5 * np.tanh(m))
    np.testing.assert_allclose(np.abs(out.data), 0.5 * math.tanh(1) * np.abs(spec.data))


def test_m_zero_and_one(rng):
    spec = random_spec(rng)
    assert np.array_equal(mask_apply_m(spec, np.zeros(spec.shape)).data, spec.data)
    doubled = mask_apply_m(spec, np.ones(spec.shape)).data
    np.testing.assert_allclose(np.abs(doubled), 2 * np.abs(spec.data), rtol=1e-15)
    np.testing.assert_allclose(np.angle(doubled), np.angle(spec.data), atol=1e-15)


def test_m_matches_scalar_oracle(rng):
    spec = random_spec(rng, 3)
    mask = rng.random(spec.shape)
    out = mask_apply_m(spec, mask).data
    for t in range(3):
        for f in range(257):
            s = spec.data[t, f]
            want = abs(s) * (1 + mask[t, f]) * cmath.exp(1j * cmath.phase(s))
            assert abs(out[t, f] - want) <= 1e-9


def test_m_never_decreases(rng):
    spec = random_spec(rng)
    out = mask_apply_m(spec, rng.random(spec.shape))
    assert np.all(np.abs(out.data) >= np.abs(spec.data))


def test_zero_spectrogram_preserved(rng):
    spec = ComplexSpectrogram(np.zeros((2, 257), complex))
    shape = spec.shape
    assert not np.any(mask_apply_e(spec, ComplexMask(rng.normal(size=shape), rng.normal(size=shape))).data)
    assert not np.any(mask_apply_m(spec, rng.random(shape)).data)


def test_validation(rng):
    spec = random_spec(rng)
    with pytest.raises(ValidationError):
        mask_apply_m(spec, np.full(spec.shape, 1.5))
    with pytest.raises(ValidationError):
        mask_apply_m(spec, np.zeros((2, 257)))
    with pytest.raises(ValidationError):
        mask_apply_e(spec, ComplexMask(np.zeros((2, 257)), np.zeros((2, 257))))
    with pytest.raises(ValidationError):
        MagnitudeMask([-0.1])
