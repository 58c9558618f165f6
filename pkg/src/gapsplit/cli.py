"""Command-line entry point.

Subcommands mirror the pipeline stages:

    gapsplit decompose --manifest m.txt --out out/
    gapsplit classify  --manifest m.txt --out out/ --theta 2.0
    gapsplit nullmodel --out out/ --seed 0 [--params file]
    gapsplit simulate  --scenario s.txt --out out/ [--seed 0]
    gapsplit render    --curves out/curves --out grid.svg --scale log
    gapsplit report    --manifest m.txt --out out/

Exit codes: 0 success, 1 partial failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import sys
from pathlib import Path

from .errors import ConfigError, GapsplitError
from .report import EXIT_CONFIG, run_manifest
from .returns import read_curves_csv
from .svg_grid import PlotSpec, grid_shape, render_grid


def _add_range_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--start", type=dt.date.fromisoformat, default=None,
                        help="global start date (per-instrument manifest dates win)")
    parser.add_argument("--end", type=dt.date.fromisoformat, default=None,
                        help="global end date")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapsplit",
        description="Overnight/intraday return decomposition and simulation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="write per-instrument cumulative curve CSVs")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    _add_range_flags(p)

    p = sub.add_parser("classify", help="label instruments Long/Short/None")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--theta", type=float, default=2.0)
    _add_range_flags(p)

    p = sub.add_parser("nullmodel", help="generate the random-walk panel")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--params", type=Path, default=None, help="key = value overrides file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")

    p = sub.add_parser("simulate", help="run a strategy-sim scenario")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--theta", type=float, default=2.0)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")

    p = sub.add_parser("render", help="render curve CSVs as an SVG grid")
    p.add_argument("--curves", required=True, type=Path, help="directory of curve CSVs")
    p.add_argument("--out", required=True, type=Path, help="output SVG path")
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--cols", type=int, default=5)

    p = sub.add_parser("report", help="full pipeline: curves, labels, grid, summary")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--theta", type=float, default=2.0)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    _add_range_flags(p)

    return parser


def _render_command(args: argparse.Namespace) -> int:
    paths = sorted(args.curves.glob("*.csv"))
    if not paths:
        print(f"error: no curve CSVs in {args.curves}", file=sys.stderr)
        return EXIT_CONFIG
    curve_list = []
    for path in paths:
        instrument = path.stem
        if instrument.endswith(".curves"):
            instrument = instrument[: -len(".curves")]
        curve_list.append(read_curves_csv(path, instrument))
    rows, cols = grid_shape(len(curve_list), args.cols)
    spec = PlotSpec(rows=rows, cols=cols, y_scale=args.scale)
    try:
        svg = render_grid(curve_list, spec)
    except GapsplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(svg, encoding="utf-8")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "decompose":
        return run_manifest(
            args.manifest, "real-data", args.out, start=args.start, end=args.end,
            outputs=frozenset({"curves", "summary"}),
        )
    if args.command == "classify":
        return run_manifest(
            args.manifest, "real-data", args.out, start=args.start, end=args.end,
            theta=args.theta, outputs=frozenset({"labels", "summary"}),
        )
    if args.command == "nullmodel":
        return run_manifest(args.params, "null-model", args.out, seed=args.seed,
                            scale=args.scale)
    if args.command == "simulate":
        return run_manifest(args.scenario, "strategy-sim", args.out, seed=args.seed,
                            theta=args.theta, scale=args.scale)
    if args.command == "render":
        try:
            return _render_command(args)
        except (ConfigError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    if args.command == "report":
        return run_manifest(
            args.manifest, "real-data", args.out, seed=args.seed, start=args.start,
            end=args.end, theta=args.theta, scale=args.scale,
        )
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
