"""Resonance counting statistics across system sizes and scaling-law fits.

The fraction of resonances inside a fixed window of typical lifetimes
shrinks as a power of the system size; the exponent is extracted by an
unweighted least-squares line through the log-log points.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import linregress

from . import __version__
from .rotor import OpenMapSpec, open_map
from .spectra import ResonanceSet, count_in_band, eigenvalues

DEFAULT_WINDOW = (0.1, 0.98)
DEFAULT_SWEEP_DIMS = (160, 320, 640, 1280)


@dataclass(frozen=True)
class PCurve:
    """Fraction of resonances with modulus strictly above each threshold."""

    thresholds: np.ndarray
    fraction: np.ndarray
    K: int


def p_curve(resonances: ResonanceSet, thresholds: Sequence[float]) -> PCurve:
    """Evaluate P(mu) = #{|mu_n| > mu} / K on sorted thresholds in [0, 1]."""
    thr = np.asarray(thresholds, dtype=float)
    if thr.size == 0:
        raise ValueError("need at least one threshold")
    if np.any(thr < 0.0) or np.any(thr > 1.0) or np.any(np.diff(thr) < 0.0):
        raise ValueError("thresholds must be sorted and within [0, 1]")
    if resonances.K == 0:
        raise ValueError("empty resonance set")
    mods = resonances.moduli
    if mods.max() > 1.0 + 1e-8:
        raise ValueError("resonance moduli stray outside the unit disk beyond slack")
    # roundoff can push contraction eigenvalues a few ulp past 1; clipping
    # keeps the curve pinned to P(0) = 1 and P(1) = 0
    mods = np.sort(np.clip(mods, 0.0, 1.0))
    # count of moduli strictly greater than each threshold
    above = mods.size - np.searchsorted(mods, thr, side="right")
    return PCurve(thresholds=thr, fraction=above / mods.size, K=mods.size)


def p_typ(resonances: ResonanceSet, window: tuple[float, float] = DEFAULT_WINDOW) -> float:
    """Fraction of resonances with modulus strictly inside the window.

    Equals P(lo) - P(hi) whenever no modulus sits exactly at the upper
    edge, matching the band-count convention of strict inequalities.
    """
    lo, hi = window
    return count_in_band(resonances, lo, hi) / resonances.K


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit of the typical-lifetime fraction against system size."""

    slope: float
    stderr: float
    intercept: float

    @property
    def count_exponent(self) -> float:
        """Exponent for the resonance count M * P_typ."""
        return self.slope + 1.0


def scaling_fit(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Unweighted least squares of ln(P_typ) against ln(M).

    Needs at least three distinct sizes with strictly positive fractions.
    """
    if len(points) < 3:
        raise ValueError(f"need at least 3 points for a scaling fit, got {len(points)}")
    dims = np.array([float(m) for m, _ in points])
    fracs = np.array([float(f) for _, f in points])
    if np.any(fracs <= 0.0):
        raise ValueError("all fractions must be positive for a log-log fit")
    if np.unique(dims).size < 3:
        raise ValueError("need at least 3 distinct system sizes")
    res = linregress(np.log(dims), np.log(fracs))
    return ScalingFit(slope=res.slope, stderr=res.stderr, intercept=res.intercept)


def chaotic_exponent(d: float, lyap: float, dwell: float) -> float:
    """Predicted count exponent d - 1/(lyap * dwell) for globally chaotic decay."""
    if lyap <= 0.0 or dwell <= 0.0:
        raise ValueError("Lyapunov exponent and dwell time must be positive")
    return d - 1.0 / (lyap * dwell)


def weyl_sweep(
    dims: Sequence[int],
    kick: float,
    opening: tuple[float, float],
    window: tuple[float, float] = DEFAULT_WINDOW,
    convention: str = "left",
    threads: int = 1,
) -> dict:
    """Diagonalize the open map across sizes and fit the scaling law.

    Returns a JSON-ready report with per-size band counts, the fitted
    slope and standard error, and full provenance.  Sizes may be solved
    concurrently; the report order follows the requested size order.
    """
    dims = [int(m) for m in dims]
    if len(dims) < 3:
        raise ValueError("a sweep needs at least 3 system sizes")
    lo, hi = window

    def solve(dim: int) -> dict:
        spec = OpenMapSpec(dim=dim, kick=kick, opening=tuple(opening), convention=convention)
        res = eigenvalues(open_map(spec))
        mods = res.moduli
        in_window = count_in_band(res, lo, hi)
        return {
            "M": dim,
            "K": res.K,
            "count_below_window": int(np.count_nonzero(mods <= lo)),
            "count_in_window": in_window,
            "count_above_window": int(np.count_nonzero(mods >= hi)),
            "p_typ": in_window / res.K,
            "fraction_above_hi": float(np.count_nonzero(mods > hi)) / res.K,
        }

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, dims))
    else:
        rows = [solve(m) for m in dims]

    fit = scaling_fit([(row["M"], row["p_typ"]) for row in rows])
    return {
        "tool": "rotorweyl",
        "version": __version__,
        "kick": kick,
        "opening": list(opening),
        "window": list(window),
        "convention": convention,
        "sizes": rows,
        "fit": {
            "slope": fit.slope,
            "stderr": fit.stderr,
            "intercept": fit.intercept,
            "count_exponent": fit.count_exponent,
        },
    }
