"""Shared constants, errors and small numeric helpers."""

import math

import numpy as np

LOG_FLOOR = 1e-8
SAMPLE_RATE = 16000


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


def round_half_away(x):
    """Round half away from zero, for scalars or arrays."""
    if np.ndim(x) == 0:
        return int(math.copysign(math.floor(abs(x) + 0.5), x))
    x = np.asarray(x, dtype=float)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def safe_log(mag, floor=LOG_FLOOR):
    if floor <= 0:
        raise ValidationError(f"log floor must be positive, got {floor}")
    return np.log(np.maximum(mag, floor))


def require_finite(name, arr):
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")


def require_binary(name, arr):
    arr = np.asarray(arr)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValidationError(f"{name} must contain only 0/1 entries")
