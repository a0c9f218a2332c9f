"""Figure builders for the emitted data files.

Pure display code: every function reads the documented CSV/JSON/binary
formats, never mutates its inputs, and never recomputes physics (the
scaling figure draws the fit line from the slope and intercept stored in
the report rather than refitting).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib import pyplot as plt
from matplotlib.colors import BoundaryNorm, ListedColormap

from .gridfile import MAGIC_ESCAPE, MAGIC_HUSIMI, read_grid

#: zone colors in first-escape order t = 1, 2, 3, 4, then fallbacks
ZONE_COLORS = ("red", "blue", "green", "magenta", "orange", "cyan", "brown")
OPENING_COLOR = "0.85"       # cells that start inside the opening
NOT_ESCAPED_COLOR = "white"  # cells that never reach the opening


@dataclass(frozen=True)
class FigureRecipe:
    """Display options; recipes never modify the underlying data."""

    cmap: str = "viridis"
    normalization: str = "panel-max"
    overlay_zones: bool = False
    dpi: int = 150
    panel_size: float = 4.0
    zone_colors: tuple[str, ...] = ZONE_COLORS


def save_figure(fig, out: str | Path) -> Path:
    """Write a figure without volatile encoder metadata, then close it."""
    out = Path(out)
    suffix = out.suffix.lower()
    if suffix == ".png":
        fig.savefig(out, metadata={"Software": None})
    elif suffix == ".svg":
        with matplotlib.rc_context({"svg.hashsalt": "plotkit"}):
            fig.savefig(out, metadata={"Date": None})
    else:
        fig.savefig(out)
    plt.close(fig)
    return out


def zone_color_table(t_max: int, recipe: FigureRecipe = FigureRecipe()):
    """Colormap and norm for escape-time values in {-1, 0, 1, ..., t_max}."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    colors = [NOT_ESCAPED_COLOR, OPENING_COLOR]
    for t in range(1, t_max + 1):
        colors.append(recipe.zone_colors[(t - 1) % len(recipe.zone_colors)])
    boundaries = np.arange(-1.5, t_max + 1.0)
    return ListedColormap(colors), BoundaryNorm(boundaries, len(colors))


def _imshow_grid(ax, values, **kwargs):
    # grid layout is row-major with q outer, p inner; show q on the x axis
    return ax.imshow(
        values.T,
        origin="lower",
        extent=(0.0, 1.0, 0.0, 1.0),
        aspect="equal",
        interpolation="nearest",
        **kwargs,
    )


def _draw_zone_map(ax, times, recipe: FigureRecipe):
    t_max = int(times.max(initial=1))
    cmap, norm = zone_color_table(max(t_max, 1), recipe)
    img = _imshow_grid(ax, times.astype(float), cmap=cmap, norm=norm)
    ax.set_title("escape zones")
    return img


def _draw_husimi(ax, values, recipe: FigureRecipe):
    peak = values.max()
    scaled = values / peak if (recipe.normalization == "panel-max" and peak > 0) else values
    img = _imshow_grid(ax, scaled, cmap=recipe.cmap, vmin=0.0, vmax=1.0)
    ax.set_title("Husimi density")
    return img


def _overlay_zones(ax, times, recipe: FigureRecipe):
    nq, np_ = times.shape
    q = (np.arange(nq) + 0.5) / nq
    p = (np.arange(np_) + 0.5) / np_
    t_max = int(times.max(initial=1))
    for t in range(1, t_max + 1):
        mask = (times == t).astype(float)
        if mask.any():
            color = recipe.zone_colors[(t - 1) % len(recipe.zone_colors)]
            ax.contour(q, p, mask.T, levels=[0.5], colors=[color], linewidths=0.8)


def render_phase_space(paths, recipe: FigureRecipe = FigureRecipe()):
    """Heatmap/zone panels for one or more grid files, optionally overlaid.

    Husimi grids render as per-panel-max heatmaps, escape grids as
    color-coded zone maps.  With ``overlay_zones`` the zones of every
    escape grid are drawn as contours over each Husimi panel.
    """
    paths = [Path(p) for p in (paths if isinstance(paths, (list, tuple)) else [paths])]
    if not paths:
        raise ValueError("no grid files given")
    grids = [read_grid(p) for p in paths]
    husimi = [(p, v) for p, (m, v) in zip(paths, grids) if m == MAGIC_HUSIMI]
    escape = [(p, v) for p, (m, v) in zip(paths, grids) if m == MAGIC_ESCAPE]
    n_panels = len(husimi) + len(escape)
    fig, axes = plt.subplots(
        1, n_panels,
        figsize=(recipe.panel_size * n_panels, recipe.panel_size),
        dpi=recipe.dpi,
        squeeze=False,
    )
    col = 0
    for _, times in escape:
        _draw_zone_map(axes[0, col], times, recipe)
        col += 1
    for _, values in husimi:
        _draw_husimi(axes[0, col], values, recipe)
        if recipe.overlay_zones:
            for _, times in escape:
                _overlay_zones(axes[0, col], times, recipe)
        col += 1
    for ax in axes[0]:
        ax.set_xlabel("q")
        ax.set_ylabel("p")
    fig.tight_layout()
    return fig


def _read_spectrum_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"n", "re", "im", "modulus"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(f"{path}: not a spectrum CSV (header {reader.fieldnames})")
        re, im, mod = [], [], []
        for row in reader:
            re.append(float(row["re"]))
            im.append(float(row["im"]))
            mod.append(float(row["modulus"]))
    return {"re": np.array(re), "im": np.array(im), "modulus": np.array(mod)}


def render_spectrum(path, recipe: FigureRecipe = FigureRecipe()):
    """Eigenvalues of one spectrum CSV scattered in the unit disk."""
    data = _read_spectrum_csv(path)
    fig, ax = plt.subplots(figsize=(recipe.panel_size, recipe.panel_size), dpi=recipe.dpi)
    angle = np.linspace(0.0, 2.0 * np.pi, 512)
    ax.plot(np.cos(angle), np.sin(angle), color="0.6", linewidth=0.8, zorder=1)
    ax.scatter(data["re"], data["im"], s=6, color="tab:blue", zorder=2)
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"{len(data['re'])} eigenvalues")
    fig.tight_layout()
    return fig


def render_pcurves(paths, recipe: FigureRecipe = FigureRecipe()):
    """Overlaid lifetime-threshold curves from several spectrum CSVs.

    For each file the curve P(mu) = (fraction of moduli strictly above mu)
    is drawn as a step function of the sorted moduli; one curve per system
    size shows how the body of P drops with growing dimension.
    """
    paths = [Path(p) for p in (paths if isinstance(paths, (list, tuple)) else [paths])]
    if not paths:
        raise ValueError("no spectrum files given")
    fig, ax = plt.subplots(figsize=(recipe.panel_size * 1.4, recipe.panel_size), dpi=recipe.dpi)
    for path in paths:
        mods = np.sort(np.clip(_read_spectrum_csv(path)["modulus"], 0.0, 1.0))
        K = mods.size
        mu = np.concatenate([[0.0], mods, [1.0]])
        frac = np.concatenate([[1.0], 1.0 - (np.arange(K) + 1.0) / K, [0.0]])
        ax.step(mu, frac, where="post", label=f"K={K}")
    ax.set_xlabel("modulus threshold")
    ax.set_ylabel("fraction above threshold")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def render_scaling(path, recipe: FigureRecipe = FigureRecipe()):
    """Log-log scaling plot from a sweep report; the fit line is read, not refit."""
    report = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        sizes = [row["M"] for row in report["sizes"]]
        fracs = [row["p_typ"] for row in report["sizes"]]
        fit = report["fit"]
        slope, stderr, intercept = fit["slope"], fit["stderr"], fit["intercept"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a sweep report ({exc})") from exc
    fig, ax = plt.subplots(figsize=(recipe.panel_size * 1.4, recipe.panel_size), dpi=recipe.dpi)
    ax.loglog(sizes, fracs, "o", color="tab:blue", label="measured fraction")
    line_x = np.array([min(sizes), max(sizes)], dtype=float)
    line_y = np.exp(intercept) * line_x ** slope
    ax.loglog(line_x, line_y, "-", color="tab:red",
              label=f"slope = {slope:.2f} ± {stderr:.2f}")
    ax.set_xlabel("system size M")
    ax.set_ylabel("typical-lifetime fraction")
    window = report.get("window")
    if window:
        ax.set_title(f"window ({window[0]}, {window[1]})")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig
