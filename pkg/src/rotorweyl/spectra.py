"""Resonance spectra and modulus-ordered Schur forms of open quantum maps.

Eigenvalues of the truncated propagator sit inside the closed unit disk;
the modulus of an eigenvalue is the per-step survival amplitude of the
corresponding resonance.  Because the truncated matrix is not normal, its
eigenvectors overlap, so invariant-subspace questions are answered through
a Schur decomposition whose diagonal is sorted by modulus with unitary
adjacent-entry swaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np
import scipy.linalg

from .rotor import OpenMap, OpenMapSpec

ORDER_FAST = "fast"   # ascending modulus: fastest-decaying states first
ORDER_SLOW = "slow"   # descending modulus: longest-lived states first

#: adjacent diagonal entries closer than this in modulus are never swapped
TIE_TOLERANCE = 1e-12

#: a swap must annihilate the subdiagonal entry to this level (relative)
SWAP_RESIDUAL_TOLERANCE = 1e-8

MODULUS_SLACK = 1e-8


class EigensolverError(RuntimeError):
    """Dense eigensolver failed to converge."""


class SchurReorderError(RuntimeError):
    """An adjacent-entry swap left a subdiagonal residual above tolerance."""


@dataclass(frozen=True)
class ResonanceSet:
    """All eigenvalues of one open map, in eigensolver output order."""

    eigenvalues: np.ndarray
    spec: OpenMapSpec

    @property
    def K(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.eigenvalues)


def eigenvalues(open_map: OpenMap) -> ResonanceSet:
    """Full eigenvalue set of the truncated propagator (with multiplicity)."""
    A = open_map.matrix
    if not np.all(np.isfinite(A)):
        raise ValueError("open-map matrix contains non-finite entries")
    try:
        vals = scipy.linalg.eigvals(A)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise EigensolverError(
            f"eigensolver did not converge for spec {open_map.spec!r}"
        ) from exc
    return ResonanceSet(eigenvalues=vals, spec=open_map.spec)


def modulus_to_rate(modulus: float) -> tuple[float, float]:
    """Convert an eigenvalue modulus to (decay rate per step, lifetime in steps).

    modulus = exp(-rate/2); rate = -2 ln(modulus), lifetime = 1/rate.
    The endpoints map to sentinels: modulus 0 -> (inf, 0), modulus 1 -> (0, inf).
    Values straying outside [0, 1] by more than 1e-8 are rejected.
    """
    m = float(modulus)
    if m < -MODULUS_SLACK or m > 1.0 + MODULUS_SLACK:
        raise ValueError(f"modulus {m!r} outside [0, 1] beyond slack {MODULUS_SLACK}")
    m = min(max(m, 0.0), 1.0)
    if m == 0.0:
        return math.inf, 0.0
    if m == 1.0:
        return 0.0, math.inf
    rate = -2.0 * math.log(m)
    return rate, 1.0 / rate


def count_in_band(resonances: ResonanceSet | np.ndarray, lo: float, hi: float) -> int:
    """Number of eigenvalues with lo < |mu| < hi (strict on both sides)."""
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"band must satisfy 0 <= lo < hi <= 1, got ({lo}, {hi})")
    m = resonances.moduli if isinstance(resonances, ResonanceSet) else np.abs(resonances)
    return int(np.count_nonzero((m > lo) & (m < hi)))


@dataclass(frozen=True)
class SchurForm:
    """Unitary basis and triangular factor with modulus-sorted diagonal.

    matrix = basis @ triangular @ basis.conj().T; the leading r basis
    columns span an invariant subspace holding the r fastest-decaying
    (order "fast") or longest-lived (order "slow") resonance states.
    """

    basis: np.ndarray
    triangular: np.ndarray
    order: str

    @property
    def K(self) -> int:
        return self.triangular.shape[0]

    @property
    def diag_moduli(self) -> np.ndarray:
        return np.abs(np.diag(self.triangular))


def _swap_adjacent(T: np.ndarray, U: np.ndarray, i: int) -> None:
    # Unitary similarity exchanging diagonal entries i and i+1 of the upper
    # triangular T.  The rotation's first column is the unit eigenvector of
    # the 2x2 block for the lower-right eigenvalue, so the block comes out
    # triangular again with the diagonal swapped.
    a = T[i, i]
    b = T[i, i + 1]
    d = T[i + 1, i + 1]
    v0, v1 = b, d - a
    nv = math.hypot(abs(v0), abs(v1))
    if nv == 0.0:
        # identical diagonal entries with zero coupling: nothing to do
        return
    G = np.array(
        [[v0 / nv, -np.conj(v1) / nv], [v1 / nv, np.conj(v0) / nv]],
        dtype=T.dtype,
    )
    T[i : i + 2, i:] = G.conj().T @ T[i : i + 2, i:]
    T[: i + 2, i : i + 2] = T[: i + 2, i : i + 2] @ G
    U[:, i : i + 2] = U[:, i : i + 2] @ G
    scale = max(abs(a), abs(d), abs(b), 1.0)
    resid = abs(T[i + 1, i]) / scale
    if resid > SWAP_RESIDUAL_TOLERANCE:
        raise SchurReorderError(
            f"swap of diagonal entries {i},{i + 1} left relative residual {resid:.3e}"
        )
    T[i + 1, i] = 0.0


def ordered_schur(
    open_map: OpenMap | np.ndarray,
    order: str = ORDER_FAST,
    tie_tolerance: float = TIE_TOLERANCE,
) -> SchurForm:
    """Complex Schur form with the diagonal sorted by modulus.

    The initial decomposition comes from the standard dense reduction; the
    diagonal is then sorted purely by unitary similarity swaps of adjacent
    entries so the factors always stay consistent.  Adjacent entries whose
    moduli differ by less than ``tie_tolerance`` are left in place: swapping
    them cannot change any modulus-band count, and skipping them avoids
    ill-conditioned rotations between near-identical eigenvalues.  The
    resulting diagonal is monotone per ``order`` up to ``tie_tolerance``
    between neighbours.
    """
    if order not in (ORDER_FAST, ORDER_SLOW):
        raise ValueError(f"order must be '{ORDER_FAST}' or '{ORDER_SLOW}', got {order!r}")
    A = open_map.matrix if isinstance(open_map, OpenMap) else np.asarray(open_map)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    T, U = scipy.linalg.schur(A.astype(np.complex128, copy=False), output="complex")
    K = T.shape[0]
    ascending = order == ORDER_FAST
    mods = [abs(T[i, i]) for i in range(K)]
    # insertion sort realized as adjacent swaps; each swap is a unitary
    # similarity, so basis and triangular factor never drift apart
    for j in range(1, K):
        i = j
        while i > 0:
            diff = mods[i - 1] - mods[i]
            if not ascending:
                diff = -diff
            if diff > tie_tolerance:
                _swap_adjacent(T, U, i - 1)
                mods[i - 1] = abs(T[i - 1, i - 1])
                mods[i] = abs(T[i, i])
                i -= 1
            else:
                break
    return SchurForm(basis=U, triangular=T, order=order)


def subspace_basis(schur: SchurForm, r: int) -> np.ndarray:
    """First r Schur vectors (columns); they span an invariant subspace."""
    if not 1 <= r <= schur.K:
        raise ValueError(f"subspace size must be in [1, {schur.K}], got {r}")
    return schur.basis[:, :r]


def invariance_residual(matrix: np.ndarray, basis: np.ndarray) -> float:
    """Spectral norm of (I - P) A P for the orthogonal projector P onto span(basis)."""
    AB = matrix @ basis
    leak = AB - basis @ (basis.conj().T @ AB)
    return float(np.linalg.norm(leak, 2))


SPECTRUM_CSV_HEADER = "n,re,im,modulus,gamma,tau"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_spectrum_csv(fh: TextIO, resonances: ResonanceSet) -> None:
    """Write eigenvalues as CSV rows ``n,re,im,modulus,gamma,tau``.

    Rows whose decay rate or lifetime is a sentinel (modulus exactly 0 or 1)
    carry empty gamma and tau fields.
    """
    fh.write(SPECTRUM_CSV_HEADER + "\n")
    for n, val in enumerate(resonances.eigenvalues):
        m = abs(val)
        rate, life = modulus_to_rate(m)
        if math.isinf(rate) or math.isinf(life):
            gamma_s = tau_s = ""
        else:
            gamma_s, tau_s = _fmt(rate), _fmt(life)
        fh.write(
            f"{n},{_fmt(val.real)},{_fmt(val.imag)},{_fmt(m)},{gamma_s},{tau_s}\n"
        )
