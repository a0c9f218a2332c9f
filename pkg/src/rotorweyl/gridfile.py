"""Binary container for phase-space grids, shared by Husimi and escape maps.

Layout: an 8-byte ASCII magic, two little-endian u32 grid dimensions
(nq, np), then nq*np cell values in row-major order with q as the outer
axis.  Husimi grids (magic ``HUSIGRID``) store little-endian float64;
escape-time grids (magic ``ESCZGRID``) store little-endian int32 where -1
means the orbit never reached the opening and 0 marks cells that started
inside it.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

MAGIC_HUSIMI = b"HUSIGRID"
MAGIC_ESCAPE = b"ESCZGRID"

_DTYPES = {MAGIC_HUSIMI: np.dtype("<f8"), MAGIC_ESCAPE: np.dtype("<i4")}


class GridFileError(ValueError):
    """Malformed grid container (bad magic, truncated payload, ...)."""


def _atomic_write_bytes(path: str | Path, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    _atomic_write_bytes(path, text.encode("utf-8"))


def write_json(path: str | Path, obj: dict) -> None:
    """Deterministic JSON writer: sorted keys, stable float repr, newline at EOF."""
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def grid_payload(magic: bytes, values: np.ndarray) -> bytes:
    if magic not in _DTYPES:
        raise GridFileError(f"unknown grid magic {magic!r}")
    if values.ndim != 2:
        raise GridFileError(f"grid values must be 2-D, got shape {values.shape}")
    nq, np_ = values.shape
    data = np.ascontiguousarray(values, dtype=_DTYPES[magic])
    return magic + struct.pack("<II", nq, np_) + data.tobytes()


def write_grid(path: str | Path, magic: bytes, values: np.ndarray) -> None:
    _atomic_write_bytes(path, grid_payload(magic, values))


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
    values = np.frombuffer(raw, dtype=dtype, offset=16).reshape(nq, np_)
    return magic, values.copy()
