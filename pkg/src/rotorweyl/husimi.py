"""Torus coherent states and Husimi phase-space densities.

A coherent state on the discretized torus is a Gaussian wavepacket
periodized over winding images, with equal position and momentum
uncertainty (one Planck cell of area 1/M).  The Husimi density of a set of
states is the summed squared overlap with the coherent state centered at
each grid point; applied to the leading columns of a modulus-ordered Schur
basis it resolves where in phase space the fastest-decaying or
longest-lived resonance subspace lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rotor import OpenMapSpec, site_positions
from .spectra import SchurForm, subspace_basis

DEFAULT_GRID = (256, 256)
DEFAULT_IMAGES = 4


@dataclass(frozen=True)
class HusimiGrid:
    """Non-negative density sampled on a cell-centered rectangular grid.

    ``values[iq, ip]`` belongs to the phase-space point
    (q_axis[iq], p_axis[ip]); meta carries provenance (map parameters, the
    subspace or band the density describes, and the state count r).
    """

    values: np.ndarray
    q_axis: np.ndarray
    p_axis: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def total(self) -> float:
        return float(self.values.sum())


def _cell_centers(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def coherent_state(
    dim: int,
    q0: float,
    p0: float,
    images: int = DEFAULT_IMAGES,
    convention: str = "left",
) -> np.ndarray:
    """Unit-norm amplitudes of the torus coherent state centered at (q0, p0).

    The packet is a circular Gaussian of width matching one Planck cell,
    summed over ``images`` winding copies on each side.  Centers are
    interpreted on the torus, so shifting q0 by an integer reproduces the
    same physical state up to a global phase.  images >= 2 keeps the
    truncation error far below double precision for dim >= 16.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if images < 2:
        raise ValueError(f"need at least 2 winding images, got {images}")
    q = site_positions(dim, convention)
    wind = np.arange(-images, images + 1)
    dq = q[:, None] - q0 - wind[None, :]
    amp = np.exp(
        -np.pi * dim * dq**2 + 2j * np.pi * dim * p0 * (q[:, None] - wind[None, :])
    ).sum(axis=1)
    return amp / np.linalg.norm(amp)


def _embed(vectors: np.ndarray, kept: np.ndarray, dim: int) -> np.ndarray:
    vectors = np.asarray(vectors)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    if vectors.shape[0] != len(kept):
        raise ValueError(
            f"vectors live on {vectors.shape[0]} sites but kept_sites has {len(kept)}"
        )
    full = np.zeros((dim, vectors.shape[1]), dtype=np.complex128)
    full[np.asarray(kept)] = vectors
    return full


def husimi_states(
    vectors: np.ndarray,
    kept: np.ndarray,
    spec: OpenMapSpec,
    shape: tuple[int, int] = DEFAULT_GRID,
    images: int = DEFAULT_IMAGES,
    meta: dict | None = None,
) -> HusimiGrid:
    """Summed Husimi density of the given states on a cell-centered grid.

    ``vectors`` holds one state per column, expressed on the kept sites;
    each is zero-padded to the full lattice before taking overlaps.  An
    empty column set yields the all-zero grid.  Grid values are densities
    against normalized coherent states, so a complete orthonormal basis of
    the kept-site subspace reproduces the squared norm of the projected
    coherent state at every point.
    """
    dim = spec.dim
    nq, np_ = shape
    if nq < 1 or np_ < 1:
        raise ValueError(f"grid shape must be positive, got {shape}")
    full = _embed(vectors, kept, dim)
    q_axis = _cell_centers(nq)
    p_axis = _cell_centers(np_)
    values = np.zeros((nq, np_))
    out_meta = {"spec": spec.to_dict(), "grid": [nq, np_], "images": images}
    if meta:
        out_meta.update(meta)
    if full.shape[1] == 0:
        return HusimiGrid(values=values, q_axis=q_axis, p_axis=p_axis, meta=out_meta)

    q_sites = site_positions(dim, spec.convention)
    wind = np.arange(-images, images + 1)
    # conj(coherent amplitude) factorizes over the p axis:
    #   conj(a_n(q0, p)) = e^{-2 pi i dim p q_n} sum_w g_w(n; q0) e^{+2 pi i dim p w}
    # so one q row costs a (np x 2V+1) @ (2V+1 x dim) product instead of a
    # separate periodized sum per grid point.
    phase_site = np.exp(-2j * np.pi * dim * np.outer(p_axis, q_sites))
    phase_wind = np.exp(2j * np.pi * dim * np.outer(p_axis, wind))
    for iq, q0 in enumerate(q_axis):
        gauss = np.exp(-np.pi * dim * (q_sites[:, None] - q0 - wind[None, :]) ** 2)
        conj_amp = phase_site * (phase_wind @ gauss.T)
        norm_sq = np.einsum("pn,pn->p", conj_amp, conj_amp.conj()).real
        overlaps = conj_amp @ full
        values[iq] = np.einsum("pr,pr->p", overlaps, overlaps.conj()).real / norm_sq
    return HusimiGrid(values=values, q_axis=q_axis, p_axis=p_axis, meta=out_meta)


def husimi_schur(
    schur: SchurForm,
    r: int,
    kept: np.ndarray,
    spec: OpenMapSpec,
    shape: tuple[int, int] = DEFAULT_GRID,
    images: int = DEFAULT_IMAGES,
) -> HusimiGrid:
    """Husimi density of the r leading Schur vectors (the ordered subspace)."""
    basis = subspace_basis(schur, r)
    return husimi_states(
        basis,
        kept,
        spec,
        shape=shape,
        images=images,
        meta={"subspace": schur.order, "r": int(r)},
    )


def _planck_partition(dim: int) -> tuple[int, int]:
    # deterministic near-square factorization dim = a * b with a <= b
    a = max(d for d in range(1, int(math.isqrt(dim)) + 1) if dim % d == 0)
    return a, dim // a


def support_cells(grid: HusimiGrid, weight_fraction: float, dim: int | None = None) -> int:
    """Planck cells needed to capture a weight fraction of the density.

    The grid is first aggregated onto an equal-area partition of phase
    space into exactly ``dim`` cells (each of Planck area 1/dim), then the
    aggregated weights are sorted descending and counted until the requested
    fraction of the total is reached.  Grid resolution of at least
    dim x dim keeps the aggregation faithful.
    """
    if not 0.0 < weight_fraction <= 1.0:
        raise ValueError(f"weight fraction must be in (0, 1], got {weight_fraction}")
    if dim is None:
        spec = grid.meta.get("spec")
        if not spec or "dim" not in spec:
            raise ValueError("grid metadata has no dimension; pass dim explicitly")
        dim = int(spec["dim"])
    total = grid.total()
    if total <= 0.0:
        raise ValueError("grid carries no weight")
    nq, np_ = grid.shape
    a, b = _planck_partition(dim)
    qi = np.minimum((grid.q_axis * a).astype(int), a - 1)
    pi = np.minimum((grid.p_axis * b).astype(int), b - 1)
    coarse = np.zeros((a, b))
    np.add.at(coarse, (qi[:, None], pi[None, :]), grid.values)
    desc = np.sort(coarse.ravel())[::-1]
    cum = np.cumsum(desc)
    return int(np.searchsorted(cum, weight_fraction * cum[-1], side="left")) + 1
