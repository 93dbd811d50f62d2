"""Matplotlib figures written next to the CSV/PGM outputs.

Figures go through the object API and the Agg canvas (no pyplot state),
and PNG metadata is stripped so reruns produce identical bytes.
"""

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .common import safe_log

RC = {"font.size": 8, "axes.titlesize": 9}
_PNG_META = {"Software": None}


def _figure(rows, cols, width=11.0, height=6.0):
    fig = Figure(figsize=(width, height), dpi=100, layout="constrained")
    FigureCanvasAgg(fig)
    axes = fig.subplots(rows, cols, squeeze=False)
    return fig, axes


def _raster(ax, values, extent, title, cmap="gray_r", **kw):
    ax.imshow(values.T, origin="lower", aspect="auto", extent=extent,
              interpolation="nearest", cmap=cmap, **kw)
    ax.set_title(title)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("frequency [Hz]")


def _save(fig, path):
    fig.savefig(path, format="png", metadata=_PNG_META)


def plot_gate_process(path, analysis, frame_dt, sample_rate):
    """Six-panel view of the gate computation: log magnitude with the picked
    pitch, R_H, R_A, R_B, the VAD/VRD flags and the final gate."""
    import matplotlib as mpl

    n_frames = analysis.magnitude.shape[0]
    extent = (0, n_frames * frame_dt, 0, sample_rate / 2)
    t = (np.arange(n_frames) + 0.5) * frame_dt
    with mpl.rc_context(RC):
        fig, axes = _figure(2, 3)
        ax = axes[0, 0]
        _raster(ax, safe_log(analysis.magnitude), extent, "log |S| and pitch", cmap="magma")
        ax.plot(t, analysis.pitch.pitch_hz, color="c", lw=0.8)
        _raster(axes[0, 1], analysis.r_h, extent, "harmonic locations R_H")
        _raster(axes[0, 2], analysis.r_a, extent, "energy labels R_A")
        _raster(axes[1, 0], analysis.r_b, extent, "energy labels R_B")
        ax = axes[1, 1]
        ax.step(t, analysis.vad + 1.2, where="mid", label="VAD")
        ax.step(t, analysis.vrd, where="mid", label="VRD")
        ax.set_yticks([0, 1, 1.2, 2.2], ["0", "1", "0", "1"])
        ax.set_xlim(extent[:2])
        ax.set_xlabel("time [s]")
        ax.set_title("frame flags")
        ax.legend(loc="upper right", frameon=False)
        _raster(axes[1, 2], analysis.gate, extent, "harmonic gate")
        _save(fig, path)


def plot_oracle(path, noisy, clean, result, stft_cfg):
    """Noisy / clean / enhanced log spectrograms plus the compensation mask."""
    import matplotlib as mpl

    from .stft import stft_forward

    frame_dt = stft_cfg.hop / noisy.sample_rate
    panels = [
        (safe_log(stft_forward(noisy, stft_cfg).magnitude), "noisy log |S|"),
        (safe_log(stft_forward(clean, stft_cfg).magnitude), "clean log |S|"),
        (safe_log(stft_forward(result.enhanced, stft_cfg).magnitude),
         f"enhanced log |S|  ({result.si_sdr_before:.2f} -> {result.si_sdr_after:.2f} dB)"),
    ]
    vmin = min(p.min() for p, _ in panels)
    vmax = max(p.max() for p, _ in panels)
    with mpl.rc_context(RC):
        fig, axes = _figure(2, 2, 9.0, 6.0)
        for ax, (values, title) in zip(axes.flat, panels):
            extent = (0, values.shape[0] * frame_dt, 0, noisy.sample_rate / 2)
            _raster(ax, values, extent, title, cmap="magma", vmin=vmin, vmax=vmax)
        mask = result.mask
        extent = (0, mask.shape[0] * frame_dt, 0, noisy.sample_rate / 2)
        _raster(axes[1, 1], mask, extent, "compensation mask", cmap="viridis", vmin=0, vmax=1)
        _save(fig, path)
