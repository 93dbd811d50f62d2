"""Forward-only gated compensation blocks.

Arrays are laid out T x F x C.  Batch norm is folded to identity, so a
"CB" block is conv followed by PReLU.  All convolutions are causal in time
(past-only padding) and "same" padded in frequency.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .common import ValidationError

PRELU_SLOPE = 0.25
DEFAULT_CHANNELS = (8, 16, 8)
DEFAULT_KERNEL = (2, 5)  # (time, freq)

_MAGIC = b"HGCW"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class ConvSpec:
    """Weights are (out_channels, in_channels, kernel_time, kernel_freq)."""

    weights: np.ndarray
    bias: np.ndarray
    stride_freq: int = 1

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 4:
            raise ValidationError(f"weights must be 4-D, got shape {w.shape}")
        if b.shape != (w.shape[0],):
            raise ValidationError(f"bias shape {b.shape} does not match {w.shape[0]} outputs")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValidationError("conv parameters must be finite")
        if self.stride_freq < 1:
            raise ValidationError("stride_freq must be >= 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    out_channels = property(lambda self: self.weights.shape[0])
    in_channels = property(lambda self: self.weights.shape[1])
    kernel_time = property(lambda self: self.weights.shape[2])
    kernel_freq = property(lambda self: self.weights.shape[3])


@dataclass(frozen=True, eq=False)
class GcbState:
    attn_conv: ConvSpec
    main_conv: ConvSpec
    residual_conv: ConvSpec

    def __post_init__(self):
        c_in = self.main_conv.in_channels
        c_out = self.main_conv.out_channels
        if self.attn_conv.in_channels != c_in + 1 or self.attn_conv.out_channels != 1:
            raise ValidationError(
                f"attention conv must map {c_in + 1} -> 1 channels, got "
                f"{self.attn_conv.in_channels} -> {self.attn_conv.out_channels}")
        if self.residual_conv.in_channels != c_out or self.residual_conv.out_channels != c_out:
            raise ValidationError(f"residual conv must map {c_out} -> {c_out} channels")
        if self.residual_conv.stride_freq != 1:
            raise ValidationError("residual conv must keep the frequency size")

    @property
    def in_channels(self):
        return self.main_conv.in_channels

    @property
    def out_channels(self):
        return self.main_conv.out_channels


def prelu(x, slope=PRELU_SLOPE):
    return np.where(x >= 0, x, slope * x)


def sigmoid(x):
    # split by sign so large |x| neither overflows nor loses precision
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def causal_conv2d(x, spec):
    """Causal-in-time 2-D convolution over a T x F x C array.

    Time is padded with kernel_time - 1 zero frames in the past, frequency
    with (kernel_freq - 1) // 2 bins on both sides.  The tap loop and
    einsum use a fixed summation order, so results are bit-reproducible.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[2] != spec.in_channels:
        raise ValidationError(
            f"input has {x.shape[-1] if x.ndim == 3 else '?'} channels, "
            f"conv expects {spec.in_channels}")
    kt, kf = spec.kernel_time, spec.kernel_freq
    n_frames, n_bins, _ = x.shape
    lo = (kf - 1) // 2
    hi = kf - 1 - lo
    padded = np.pad(x, ((kt - 1, 0), (lo, hi), (0, 0)))
    out_bins = (n_bins - 1) // spec.stride_freq + 1
    out = np.zeros((n_frames, out_bins, spec.out_channels))
    stop = spec.stride_freq * (out_bins - 1) + 1
    for i in range(kt):
        for j in range(kf):
            patch = padded[i:i + n_frames, j:j + stop:spec.stride_freq, :]
            out += np.einsum("tfc,oc->tfo", patch, spec.weights[:, :, i, j])
    return out + spec.bias


def attention_map(x, gate, state):
    """sigmoid(PReLU(conv1x1(cat(gate, x)))) as a T x F array."""
    gate = np.asarray(gate, dtype=np.float64)
    if gate.shape != x.shape[:2]:
        raise ValidationError(f"gate shape {gate.shape} does not match input {x.shape[:2]}")
    stacked = np.concatenate([gate[:, :, None], x], axis=2)
    return sigmoid(prelu(causal_conv2d(stacked, state.attn_conv)))[:, :, 0]


def gcb_forward(x, gate, state, final_block=False, slope=PRELU_SLOPE):
    """One gated compensation block.

    gated conv:  h = PReLU(conv(x * alpha))
    residual:    y = act(h + rc(h)), act = sigmoid on the final block, PReLU otherwise
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, :, None]
    if not np.all(np.isfinite(x)):
        raise ValidationError("block input contains non-finite values")
    if state.main_conv.stride_freq != 1:
        raise ValidationError("gated blocks require frequency stride 1")
    alpha = attention_map(x, gate, state)
    h = prelu(causal_conv2d(x * alpha[:, :, None], state.main_conv), slope)
    y = h + causal_conv2d(h, state.residual_conv)
    return sigmoid(y) if final_block else prelu(y, slope)


def ghcm_forward(coarse_mag, gate, blocks, slope=PRELU_SLOPE):
    """Chain the blocks on |S'| and return the T x F compensation mask.

    The final block's sigmoid channels are averaged, which leaves a
    single-channel output unchanged and keeps every entry in (0, 1).
    """
    from .masking import MagnitudeMask

    blocks = list(blocks)
    if not blocks:
        raise ValidationError("need at least one gated block")
    x = np.asarray(coarse_mag, dtype=np.float64)[:, :, None]
    for n, block in enumerate(blocks):
        if block.in_channels != x.shape[2]:
            raise ValidationError(
                f"block {n} expects {block.in_channels} channels, receives {x.shape[2]}")
        x = gcb_forward(x, gate, block, final_block=n == len(blocks) - 1, slope=slope)
    return MagnitudeMask(x.mean(axis=2))


def _random_conv(rng, c_out, c_in, kt, kf, scale):
    shape = (c_out, c_in, kt, kf)
    # float32-representable values survive the weight bundle round trip
    w = rng.uniform(-scale, scale, size=shape).astype(np.float32).astype(np.float64)
    b = rng.uniform(-scale, scale, size=c_out).astype(np.float32).astype(np.float64)
    return ConvSpec(w, b)


def init_blocks(seed=0, channels=DEFAULT_CHANNELS, in_channels=1,
                kernel=DEFAULT_KERNEL, scale=0.1):
    """Seeded uniform(-scale, scale) weights for a chain of gated blocks."""
    rng = np.random.default_rng(seed)
    blocks = []
    c_in = in_channels
    for c_out in channels:
        blocks.append(GcbState(
            attn_conv=_random_conv(rng, 1, c_in + 1, 1, 1, scale),
            main_conv=_random_conv(rng, c_out, c_in, *kernel, scale),
            residual_conv=_random_conv(rng, c_out, c_out, *kernel, scale),
        ))
        c_in = c_out
    return blocks


def save_weights(path, blocks):
    """Write the weight bundle: magic, version, block count, then per conv
    a (out, in, kt, kf) u32 header followed by f32 weights and biases."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC + bytes([_VERSION]))
        fh.write(struct.pack("<I", len(blocks)))
        for block in blocks:
            for conv in (block.attn_conv, block.main_conv, block.residual_conv):
                fh.write(struct.pack("<4I", *conv.weights.shape))
                fh.write(conv.weights.astype("<f4").tobytes())
                fh.write(conv.bias.astype("<f4").tobytes())


def load_weights(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _MAGIC or len(data) < 9 or data[4] != _VERSION:
        raise ValidationError(f"{path}: not a weight bundle (v{_VERSION})")
    (n_blocks,) = struct.unpack_from("<I", data, 5)
    pos = 9
    blocks = []
    try:
        for _ in range(n_blocks):
            convs = []
            for _ in range(3):
                shape = struct.unpack_from("<4I", data, pos)
                pos += 16
                n_w = int(np.prod(shape))
                w = np.frombuffer(data, "<f4", n_w, pos).reshape(shape)
                pos += 4 * n_w
                b = np.frombuffer(data, "<f4", shape[0], pos)
                pos += 4 * shape[0]
                convs.append(ConvSpec(w.astype(np.float64), b.astype(np.float64)))
            blocks.append(GcbState(*convs))
    except (struct.error, ValueError) as exc:
        raise ValidationError(f"{path}: truncated weight bundle") from exc
    if pos != len(data):
        raise ValidationError(f"{path}: {len(data) - pos} trailing bytes")
    return blocks
