"""Reader for the binary phase-space grid containers.

Layout: 8-byte ASCII magic (``HUSIGRID`` for float64 densities,
``ESCZGRID`` for int32 escape times), little-endian u32 nq and np, then
nq*np little-endian cell values in row-major order with q as the outer
axis.  This module deliberately depends only on the documented layout, not
on the producing package.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC_HUSIMI = b"HUSIGRID"
MAGIC_ESCAPE = b"ESCZGRID"

_DTYPES = {MAGIC_HUSIMI: np.dtype("<f8"), MAGIC_ESCAPE: np.dtype("<i4")}


class GridFileError(ValueError):
    """Malformed grid container (bad magic, truncated payload, ...)."""


def read_grid(path: str | Path) -> tuple[bytes, np.ndarray]:
    """Read a grid container; returns (magic, values) with shape (nq, np)."""
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise GridFileError(f"{path}: too short to hold a grid header")
    magic = raw[:8]
    if magic not in _DTYPES:
        raise GridFileError(f"{path}: unknown magic {magic!r}")
    nq, np_ = struct.unpack("<II", raw[8:16])
    dtype = _DTYPES[magic]
    expected = 16 + nq * np_ * dtype.itemsize
    if len(raw) != expected:
        raise GridFileError(
            f"{path}: payload size {len(raw)} does not match header "
            f"({nq} x {np_} cells of {dtype.itemsize} bytes)"
        )
    return magic, np.frombuffer(raw, dtype=dtype, offset=16).reshape(nq, np_).copy()
