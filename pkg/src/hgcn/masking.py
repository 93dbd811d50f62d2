"""Complex (tanh-bounded, additive phase) and magnitude-compensation masking."""

from dataclasses import dataclass

import numpy as np

from .common import ValidationError
from .stft import phase_of


@dataclass(frozen=True, eq=False)
class ComplexMask:
    real: np.ndarray
    imag: np.ndarray

    def __post_init__(self):
        real = np.asarray(self.real, dtype=float)
        imag = np.asarray(self.imag, dtype=float)
        if real.shape != imag.shape:
            raise ValidationError("mask real/imag shapes differ")
        if not (np.all(np.isfinite(real)) and np.all(np.isfinite(imag))):
            raise ValidationError("mask contains non-finite values")
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "imag", imag)

    @property
    def shape(self):
        return self.real.shape


@dataclass(frozen=True, eq=False)
class MagnitudeMask:
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if not np.all((values >= 0) & (values <= 1)):
            raise ValidationError("magnitude mask entries must lie in [0, 1]")
        object.__setattr__(self, "values", values)


def mask_apply_e(spec, mask, activation=np.tanh):
    """|S| * act(|M|) with phase(S) + phase(M).

    ``activation`` bounds the mask magnitude; any callable mapping [0, inf)
    into [0, 1] can stand in for plain tanh.
    """
    if spec.shape != mask.shape:
        raise ValidationError(f"spectrogram {spec.shape} and mask {mask.shape} differ")
    m = mask.real + 1j * mask.imag
    mag = np.abs(spec.data) * activation(np.abs(m))
    phase = phase_of(spec.data) + phase_of(m)
    return spec.replace(mag * np.exp(1j * phase))


def mask_apply_m(coarse, mask):
    """(1 + M) * |S'| with the coarse phase kept as is."""
    if not isinstance(mask, MagnitudeMask):
        mask = MagnitudeMask(mask)
    if mask.values.shape != coarse.shape:
        raise ValidationError(f"spectrogram {coarse.shape} and mask {mask.values.shape} differ")
    return coarse.replace(coarse.data * (1.0 + mask.values))
