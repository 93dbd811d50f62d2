"""Scale-invariant signal-to-distortion ratio."""

from dataclasses import dataclass

import numpy as np

from .common import ValidationError

CLAMP_DB = 100.0


@dataclass(frozen=True)
class MetricReport:
    si_sdr_db: float
    frames_evaluated: int


def _samples(x):
    return np.asarray(getattr(x, "samples", x), dtype=np.float64)


def si_sdr(estimate, reference):
    """SI-SDR in dB after mean removal, clamped to +/-100 dB."""
    est = _samples(estimate)
    ref = _samples(reference)
    if est.shape != ref.shape:
        raise ValidationError(f"length mismatch: {est.size} vs {ref.size}")
    est = est - est.mean()
    ref = ref - ref.mean()
    ref_energy = ref @ ref
    if ref_energy <= 0:
        raise ValidationError("reference has zero energy after mean removal")
    target = (est @ ref) / ref_energy * ref
    noise = est - target
    num = target @ target
    den = noise @ noise
    if den == 0:
        return CLAMP_DB
    if num == 0:
        return -CLAMP_DB
    return float(np.clip(10 * np.log10(num / den), -CLAMP_DB, CLAMP_DB))
