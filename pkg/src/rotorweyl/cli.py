"""Command-line front end: reproducible runs that emit CSV/JSON/grid files.

Every run resolves its configuration from built-in defaults, an optional
JSON config file, and command-line flags (flags win), then writes the
resolved configuration to ``manifest.json`` next to the data files.  A run
can be replayed from its manifest alone: ``--config manifest.json``
restores every parameter.  All payload files are written atomically and
contain no timestamps, so identical configurations reproduce identical
bytes.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .rotor import OpenMapSpec, open_map
from .spectra import (
    ORDER_FAST,
    ORDER_SLOW,
    count_in_band,
    eigenvalues,
    ordered_schur,
    write_spectrum_csv,
)
from .husimi import husimi_schur
from .classical import (
    escape_zones,
    fit_exponential_rate,
    fit_power_tail,
    phase_portrait,
    survival,
)
from .gridfile import (
    MAGIC_ESCAPE,
    MAGIC_HUSIMI,
    atomic_write_text,
    write_grid,
    write_json,
)
from .weyl import weyl_sweep

SUBCOMMANDS = (
    "spectrum",
    "schur-husimi",
    "classical-escape",
    "classical-survival",
    "phase-portrait",
    "weyl-sweep",
)


def _parse_interval(text: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = text.split(":")
        return float(lo_s), float(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi', got {text!r}") from None


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nq_s, np_s = text.lower().split("x")
        return int(nq_s), int(np_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'NQxNP', got {text!r}") from None


def _parse_dims(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


_DEFAULTS: dict[str, dict] = {
    "spectrum": {"convention": "left"},
    "schur-husimi": {
        "convention": "left",
        "order": ORDER_FAST,
        "band": (0.0, 0.1),
        "grid": (256, 256),
        "images": 4,
    },
    "classical-escape": {"n": 1000, "t_max": 4},
    "classical-survival": {
        "samples": 100_000,
        "t_max": 200,
        "seed": 0,
        "fit_exp": (1, 5),
        "fit_power": None,
    },
    "phase-portrait": {"n_traj": 40, "n_iter": 500, "seed": 0},
    "weyl-sweep": {
        "M": [160, 320, 640, 1280],
        "window": (0.1, 0.98),
        "convention": "left",
        "threads": 1,
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotorweyl",
        description="Open kicked-rotator toolkit: spectra, Husimi-Schur maps, "
        "classical escape, and fractal Weyl scaling.",
    )
    parser.add_argument("--version", action="version", version=f"rotorweyl {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output directory (default: current)")
        p.add_argument("--config", default=None, help="JSON config or manifest to merge")

    def map_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--M", type=int, default=None, help="Hilbert-space dimension")
        p.add_argument("--k", type=float, default=None, help="kicking strength")
        p.add_argument("--open", dest="open_", type=_parse_interval, default=None,
                       metavar="LO:HI", help="absorbing interval [lo, hi) in q")
        p.add_argument("--convention", choices=("left", "centered"), default=None)

    p = sub.add_parser("spectrum", help="eigenvalue spectrum of one open map as CSV")
    common(p); map_flags(p)

    p = sub.add_parser("schur-husimi", help="Husimi density of an ordered Schur subspace")
    common(p); map_flags(p)
    p.add_argument("--order", choices=(ORDER_FAST, ORDER_SLOW), default=None)
    p.add_argument("--band", type=_parse_interval, default=None, metavar="LO:HI",
                   help="modulus band selecting the subspace size r")
    p.add_argument("--grid", type=_parse_grid, default=None, metavar="NQxNP")
    p.add_argument("--images", type=int, default=None, help="coherent-state winding images")

    p = sub.add_parser("classical-escape", help="first-escape-time grid of the classical map")
    common(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--open", dest="open_", type=_parse_interval, default=None, metavar="LO:HI")
    p.add_argument("--n", type=int, default=None, help="grid resolution per axis")
    p.add_argument("--t-max", dest="t_max", type=int, default=None)

    p = sub.add_parser("classical-survival", help="survival curve and decay fits")
    common(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--open", dest="open_", type=_parse_interval, default=None, metavar="LO:HI")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--fit-exp", dest="fit_exp", type=_parse_interval, default=None,
                   metavar="LO:HI", help="window for the exponential-rate fit")
    p.add_argument("--fit-power", dest="fit_power", type=_parse_interval, default=None,
                   metavar="LO:HI", help="window for the power-tail fit")

    p = sub.add_parser("phase-portrait", help="closed-map trajectory points as CSV")
    common(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--n-traj", dest="n_traj", type=int, default=None)
    p.add_argument("--n-iter", dest="n_iter", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("weyl-sweep", help="scaling of the typical-lifetime fraction with size")
    common(p);
    p.add_argument("--M", type=_parse_dims, default=None, metavar="M1,M2,...",
                   help="system sizes to sweep")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--open", dest="open_", type=_parse_interval, default=None, metavar="LO:HI")
    p.add_argument("--window", type=_parse_interval, default=None, metavar="LO:HI")
    p.add_argument("--convention", choices=("left", "centered"), default=None)
    p.add_argument("--threads", type=int, default=None, help="parallel sizes in the sweep")

    return parser


_FLAG_KEYS = (
    "M", "k", "open_", "convention", "order", "band", "grid", "images",
    "n", "t_max", "samples", "seed", "fit_exp", "fit_power",
    "n_traj", "n_iter", "window", "threads",
)


def _resolve_config(args: argparse.Namespace) -> dict:
    sub = args.subcommand
    config = dict(_DEFAULTS[sub])
    if args.config:
        loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if "config" in loaded and isinstance(loaded["config"], dict):
            # a manifest: check it belongs to the same subcommand
            if loaded.get("subcommand") not in (None, sub):
                raise ValueError(
                    f"manifest {args.config} was written by subcommand "
                    f"{loaded.get('subcommand')!r}, not {sub!r}"
                )
            loaded = loaded["config"]
        for key, val in loaded.items():
            config[key.replace("open", "open_") if key == "open" else key] = val
    for key in _FLAG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    # normalize sequence-valued entries coming from JSON
    for key in ("open_", "band", "grid", "window", "fit_exp", "fit_power"):
        if config.get(key) is not None:
            config[key] = tuple(config[key])
    return config


def _config_for_manifest(config: dict) -> dict:
    out = {}
    for key, val in config.items():
        name = "open" if key == "open_" else key
        out[name] = list(val) if isinstance(val, tuple) else val
    return out


def _require(config: dict, keys: list[str], sub: str) -> None:
    missing = [("open" if k == "open_" else k) for k in keys if config.get(k) is None]
    if missing:
        raise ValueError(f"{sub}: missing required parameter(s): {', '.join('--' + m for m in missing)}")


def _spec_from(config: dict) -> OpenMapSpec:
    return OpenMapSpec(
        dim=config["M"],
        kick=config["k"],
        opening=tuple(config["open_"]),
        convention=config.get("convention") or "left",
    )


def _csv_text(header: str, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _run_spectrum(config: dict, out: Path) -> None:
    _require(config, ["M", "k", "open_"], "spectrum")
    res = eigenvalues(open_map(_spec_from(config)))
    buf = io.StringIO()
    write_spectrum_csv(buf, res)
    atomic_write_text(out / "spectrum.csv", buf.getvalue())


def _run_schur_husimi(config: dict, out: Path) -> None:
    _require(config, ["M", "k", "open_", "order", "band", "grid"], "schur-husimi")
    spec = _spec_from(config)
    omap = open_map(spec)
    form = ordered_schur(omap, config["order"])
    lo, hi = config["band"]
    r = count_in_band(form.diag_moduli, lo, hi)
    if r == 0:
        raise ValueError(f"band ({lo}, {hi}) selects no states; nothing to render")
    grid = husimi_schur(form, r, omap.kept, spec,
                        shape=tuple(config["grid"]), images=config["images"])
    write_grid(out / "husimi.husgrid", MAGIC_HUSIMI, grid.values)
    write_json(out / "husimi.json", {
        "spec": spec.to_dict(),
        "order": config["order"],
        "band": [lo, hi],
        "r": r,
        "K": omap.K,
        "grid": list(grid.shape),
        "images": config["images"],
        "q_axis": grid.q_axis.tolist(),
        "p_axis": grid.p_axis.tolist(),
    })


def _run_classical_escape(config: dict, out: Path) -> None:
    _require(config, ["k", "open_"], "classical-escape")
    zones = escape_zones(config["k"], tuple(config["open_"]), config["n"], config["t_max"])
    write_grid(out / "escape.escgrid", MAGIC_ESCAPE, zones.times)
    write_json(out / "escape.json", {
        "kick": config["k"],
        "opening": list(config["open_"]),
        "n": config["n"],
        "t_max": config["t_max"],
        "zone_measures": {str(t): zones.zone_measure(t) for t in range(1, config["t_max"] + 1)},
        "not_escaped_fraction": float(np.mean(zones.times == -1)),
    })


def _run_classical_survival(config: dict, out: Path) -> None:
    _require(config, ["k", "open_"], "classical-survival")
    curve = survival(config["k"], tuple(config["open_"]), config["samples"],
                     config["t_max"], config["seed"])
    rows = ([str(int(t)), repr(float(s))] for t, s in zip(curve.times, curve.fraction))
    atomic_write_text(out / "survival.csv", _csv_text("t,S", rows))
    report: dict = {
        "kick": config["k"],
        "opening": list(config["open_"]),
        "samples": config["samples"],
        "t_max": config["t_max"],
        "seed": config["seed"],
        "dwell_prediction": 1.0 / (config["open_"][1] - config["open_"][0]),
    }
    lo, hi = config["fit_exp"]
    fit = fit_exponential_rate(curve, int(lo), int(hi))
    report["exponential_fit"] = {
        "window": [int(lo), int(hi)], "rate": fit.value, "stderr": fit.stderr,
    }
    if config.get("fit_power"):
        lo, hi = config["fit_power"]
        fit = fit_power_tail(curve, int(lo), int(hi))
        report["power_tail_fit"] = {
            "window": [int(lo), int(hi)], "alpha": fit.value, "stderr": fit.stderr,
        }
    write_json(out / "survival_fit.json", report)


def _run_phase_portrait(config: dict, out: Path) -> None:
    _require(config, ["k"], "phase-portrait")
    pts = phase_portrait(config["k"], config["n_traj"], config["n_iter"], config["seed"])
    rows = ([repr(float(q)), repr(float(p))] for q, p in pts)
    atomic_write_text(out / "portrait.csv", _csv_text("q,p", rows))


def _run_weyl_sweep(config: dict, out: Path) -> None:
    _require(config, ["M", "k", "open_"], "weyl-sweep")
    report = weyl_sweep(
        dims=config["M"],
        kick=config["k"],
        opening=tuple(config["open_"]),
        window=tuple(config["window"]),
        convention=config.get("convention") or "left",
        threads=config["threads"],
    )
    write_json(out / "weyl_report.json", report)


_RUNNERS = {
    "spectrum": _run_spectrum,
    "schur-husimi": _run_schur_husimi,
    "classical-escape": _run_classical_escape,
    "classical-survival": _run_classical_survival,
    "phase-portrait": _run_phase_portrait,
    "weyl-sweep": _run_weyl_sweep,
}


def run(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        out = Path(args.out) if args.out else Path(".")
        out.mkdir(parents=True, exist_ok=True)
        _RUNNERS[args.subcommand](config, out)
        write_json(out / "manifest.json", {
            "tool": "rotorweyl",
            "version": __version__,
            "subcommand": args.subcommand,
            "config": _config_for_manifest(config),
        })
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"rotorweyl {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
