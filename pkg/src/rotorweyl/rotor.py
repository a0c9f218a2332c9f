"""Quantized kicked rotator on the unit torus and its opened (truncated) variant.

The closed system is a dense M x M unitary Floquet matrix combining a
quadratic free-propagation kernel with a cosine kick applied half on each
side.  Opening the system removes all position sites inside a half-open
interval of the torus; the open map is the kept-site submatrix, which is a
strict contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SITE_CONVENTIONS = ("left", "centered")


@dataclass(frozen=True)
class OpenMapSpec:
    """Parameters defining one open kicked-rotator instance.

    Attributes
    ----------
    dim : int
        Hilbert-space dimension M.  Also the inverse effective Planck
        constant: one Planck cell has phase-space area 1/M.
    kick : float
        Kicking strength k >= 0.  k = 0 is integrable; the classical
        dynamics turns globally chaotic around k of order 7.
    opening : tuple of float
        Half-open absorbing interval [lo, hi) on the position circle,
        contained in [0, 1).
    convention : str
        Site placement: "left" puts site n at q = n/M, "centered" at
        q = (n + 1/2)/M.
    """

    dim: int
    kick: float
    opening: tuple[float, float]
    convention: str = "left"

    def __post_init__(self) -> None:
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.dim!r}")
        if not math.isfinite(self.kick) or self.kick < 0:
            raise ValueError(f"kick strength must be finite and >= 0, got {self.kick!r}")
        lo, hi = self.opening
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"opening must satisfy 0 <= lo < hi <= 1, got {self.opening!r}")
        if not (hi - lo) < 1.0:
            raise ValueError("opening must not cover the whole circle")
        if self.convention not in SITE_CONVENTIONS:
            raise ValueError(f"convention must be one of {SITE_CONVENTIONS}, got {self.convention!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "kick", float(self.kick))
        object.__setattr__(self, "opening", (float(lo), float(hi)))

    @property
    def width(self) -> float:
        """Opening width w = hi - lo."""
        return self.opening[1] - self.opening[0]

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "kick": self.kick,
            "opening": list(self.opening),
            "convention": self.convention,
        }

    @staticmethod
    def from_dict(d: dict) -> "OpenMapSpec":
        return OpenMapSpec(
            dim=d["dim"],
            kick=d["kick"],
            opening=tuple(d["opening"]),
            convention=d.get("convention", "left"),
        )


def site_positions(dim: int, convention: str = "left") -> np.ndarray:
    """Position q_n of each of the dim lattice sites on [0, 1)."""
    offset = 0.5 if convention == "centered" else 0.0
    return (np.arange(dim) + offset) / dim


def _floquet_matrix(dim: int, kick: float) -> np.ndarray:
    # Quadratic Gauss-sum kernel times the half-kick phases.  The prefactor
    # uses the principal branch (i*dim)^(-1/2) = exp(-i pi/4)/sqrt(dim);
    # the global phase drops out of every modulus-based quantity.
    n = np.arange(dim)
    quad = (1j * np.pi / dim) * (n[None, :] - n[:, None]) ** 2
    half_kick = -(1j * dim * kick / (4.0 * np.pi)) * np.cos(2.0 * np.pi * n / dim)
    return np.exp(quad + half_kick[:, None] + half_kick[None, :]) * (
        np.exp(-0.25j * np.pi) / math.sqrt(dim)
    )


def build_floquet(spec: OpenMapSpec) -> np.ndarray:
    """Dense unitary one-step propagator of the closed kicked rotator.

    The returned matrix is symmetric (it depends on the site pair only
    through (m - n)^2 and a site-local kick phase) and unitary to better
    than 1e-12 in max norm.
    """
    return _floquet_matrix(spec.dim, spec.kick)


def opening_mask(spec: OpenMapSpec) -> np.ndarray:
    """Sorted indices of the sites removed by the opening.

    A site is removed when its position lies in [lo, hi).  Raises if the
    opening would swallow every site.
    """
    q = site_positions(spec.dim, spec.convention)
    lo, hi = spec.opening
    removed = np.flatnonzero((q >= lo) & (q < hi))
    if removed.size == spec.dim:
        raise ValueError("opening removes every site; no open map remains")
    return removed


def kept_sites(spec: OpenMapSpec) -> np.ndarray:
    """Sorted indices of the sites surviving the opening."""
    q = site_positions(spec.dim, spec.convention)
    lo, hi = spec.opening
    kept = np.flatnonzero(~((q >= lo) & (q < hi)))
    if kept.size == 0:
        raise ValueError("opening removes every site; no open map remains")
    return kept


@dataclass(frozen=True)
class OpenMap:
    """Truncation of the Floquet matrix to the kept sites.

    Storing the K x K submatrix instead of the rank-deficient M x M
    projected product drops the structurally forced zero eigenvalues and
    keeps the eigensolver cost at K^3.
    """

    matrix: np.ndarray
    kept: np.ndarray
    spec: OpenMapSpec

    @property
    def K(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_removed(self) -> int:
        return self.spec.dim - self.K


def build_open_map(floquet: np.ndarray, spec: OpenMapSpec) -> OpenMap:
    """Restrict a Floquet matrix to the rows and columns outside the opening."""
    if floquet.shape != (spec.dim, spec.dim):
        raise ValueError(
            f"Floquet matrix has shape {floquet.shape}, spec wants ({spec.dim}, {spec.dim})"
        )
    kept = kept_sites(spec)
    sub = np.ascontiguousarray(floquet[np.ix_(kept, kept)])
    return OpenMap(matrix=sub, kept=kept, spec=spec)


def open_map(spec: OpenMapSpec) -> OpenMap:
    """Convenience: build the Floquet matrix and truncate it in one go."""
    return build_open_map(build_floquet(spec), spec)
