"""Plain-file exports for rasters and frame flags (PGM, CSV)."""

import numpy as np

from .common import ValidationError, require_binary


def write_pgm(path, raster):
    """Write a T x F binary raster as a binary PGM (P5).

    The image is laid out like a spectrogram: time runs left to right and
    bin 0 is the bottom row.  Open cells are 255.
    """
    raster = np.asarray(raster)
    require_binary("raster", raster)
    img = (raster.T[::-1] * 255).astype(np.uint8)
    height, width = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def read_pgm(path):
    """Inverse of :func:`write_pgm`; returns the T x F 0/1 raster."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1
    if fields[0] != b"P5" or fields[3] != b"255":
        raise ValidationError(f"{path}: not an 8-bit P5 PGM")
    width, height = int(fields[1]), int(fields[2])
    img = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8).reshape(height, width)
    return (img[::-1].T > 0).astype(np.uint8)


def write_raster_csv(path, raster):
    """One line per frame, F comma-separated 0/1 values."""
    raster = np.asarray(raster)
    require_binary("raster", raster)
    with open(path, "w") as fh:
        for row in raster.astype(np.uint8):
            fh.write(",".join(map(str, row)) + "\n")


def write_flags_csv(path, flags, name):
    with open(path, "w") as fh:
        fh.write(f"frame,{name}\n")
        for t, v in enumerate(np.asarray(flags, dtype=np.uint8)):
            fh.write(f"{t},{v}\n")
