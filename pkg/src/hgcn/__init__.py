"""Non-neural core of harmonic gated compensation for speech enhancement."""

from .audio_io import AudioClip, WavFormatError, read_wav, write_wav
from .common import LOG_FLOOR, ValidationError
from .compensator import (ConvSpec, GcbState, causal_conv2d, gcb_forward, ghcm_forward,
                          init_blocks, load_weights, save_weights)
from .config import PipelineConfig
from .gate import GateInputs, compose_gate
from .harmonic import (IntegralMatrix, PitchTrack, SignificanceSpectrum,
                       build_integral_matrix, harmonic_raster, pick_pitch,
                       significance_spectrum)
from .masking import ComplexMask, MagnitudeMask, mask_apply_e, mask_apply_m
from .metrics import MetricReport, si_sdr
from .sed import (EnergyStats, Thresholds, corpus_stats, energy_labels, make_thresholds,
                  vad_track, vrd_track)
from .stft import (ComplexSpectrogram, StftConfig, istft_inverse, power_compress,
                   stft_forward)

__version__ = "0.1.0"
