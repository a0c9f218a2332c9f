"""Command-line rendering of emitted data files into PNG or SVG figures."""

from __future__ import annotations

import argparse
import os
import sys

os.environ.setdefault("MPLBACKEND", "Agg")

from . import figures  # noqa: E402  (backend must be pinned first)
from .gridfile import GridFileError  # noqa: E402


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render rotorweyl data files (grids, spectra, sweep reports) to figures.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("phase-space", help="heatmap/zone panels from grid files")
    p.add_argument("grids", nargs="+", help="HUSIGRID / ESCZGRID files")
    p.add_argument("--out", required=True, help="output image (.png or .svg)")
    p.add_argument("--overlay", action="store_true",
                   help="draw escape-zone contours over Husimi panels")
    p.add_argument("--cmap", default="viridis")

    p = sub.add_parser("spectrum", help="unit-disk eigenvalue scatter from spectrum.csv")
    p.add_argument("csv")
    p.add_argument("--out", required=True)

    p = sub.add_parser("pcurves", help="overlaid lifetime-threshold curves from spectrum CSVs")
    p.add_argument("csvs", nargs="+")
    p.add_argument("--out", required=True)

    p = sub.add_parser("scaling", help="log-log scaling plot from weyl_report.json")
    p.add_argument("report")
    p.add_argument("--out", required=True)

    return parser


def run(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.subcommand == "phase-space":
            recipe = figures.FigureRecipe(cmap=args.cmap, overlay_zones=args.overlay)
            fig = figures.render_phase_space(args.grids, recipe)
        elif args.subcommand == "spectrum":
            fig = figures.render_spectrum(args.csv)
        elif args.subcommand == "pcurves":
            fig = figures.render_pcurves(args.csvs)
        else:
            fig = figures.render_scaling(args.report)
        figures.save_figure(fig, args.out)
    except (GridFileError, ValueError, OSError) as exc:
        print(f"plotkit {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    print(args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
