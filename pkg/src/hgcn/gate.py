"""Harmonic gate composition: R_VAD * R_VRD * R_A * R_H."""

from dataclasses import dataclass

import numpy as np

from .common import ValidationError, require_binary


@dataclass(frozen=True, eq=False)
class GateInputs:
    r_vad: np.ndarray
    r_vrd: np.ndarray
    r_a: np.ndarray
    r_h: np.ndarray

    def __post_init__(self):
        for name in ("r_vad", "r_vrd", "r_a", "r_h"):
            arr = np.asarray(getattr(self, name))
            require_binary(name, arr)
            object.__setattr__(self, name, arr)
        if self.r_vad.ndim != 1 or self.r_vrd.ndim != 1:
            raise ValidationError("frame flags must be one-dimensional")
        if self.r_a.ndim != 2 or self.r_h.ndim != 2:
            raise ValidationError("rasters must be two-dimensional")
        n_frames = {len(self.r_vad), len(self.r_vrd), self.r_a.shape[0], self.r_h.shape[0]}
        if len(n_frames) != 1:
            raise ValidationError(f"time axis mismatch: frame counts {sorted(n_frames)}")
        if self.r_a.shape[1] != self.r_h.shape[1]:
            raise ValidationError(
                f"frequency axis mismatch: R_A has {self.r_a.shape[1]} bins, "
                f"R_H has {self.r_h.shape[1]}")


def compose_gate(inputs):
    """Elementwise product of the four factors; frame flags broadcast over bins."""
    frame = (inputs.r_vad * inputs.r_vrd).astype(np.uint8)[:, None]
    return (frame * inputs.r_a * inputs.r_h).astype(np.uint8)
