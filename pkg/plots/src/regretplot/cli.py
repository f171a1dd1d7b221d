"""Command line interface: plot <kind> <input.json> [-o out.png] [...]."""

import argparse
import sys
from pathlib import Path

import matplotlib.pyplot as plt

from .render import KINDS, WINDOWS, PlotJob, render_job
from .schema import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a figure from a simulation result JSON file.",
    )
    parser.add_argument("kind", choices=KINDS, help="figure type")
    parser.add_argument("input", help="result JSON file")
    parser.add_argument("-o", "--out", help="output image path (default <input>.<kind>.png)")
    parser.add_argument(
        "--overlay",
        action="append",
        default=[],
        metavar="RESULT",
        help="additional result files drawn on the same axes (trajectory and utility only)",
    )
    parser.add_argument(
        "--label",
        action="append",
        default=[],
        metavar="NAME",
        help="legend name for each input, in order; defaults to the file stem",
    )
    parser.add_argument(
        "--window",
        choices=WINDOWS,
        help="heatmap counts to draw: the final window (default) or all turns",
    )
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.window is not None and args.kind != "heatmap":
            raise ValueError("--window only applies to heatmap plots")
        if args.overlay and args.kind == "heatmap":
            raise ValueError("heatmap plots take exactly one input file")
        out = args.out or f"{Path(args.input).stem}.{args.kind}.png"
        job = PlotJob(
            inputs=tuple([args.input] + args.overlay),
            kind=args.kind,
            output=out,
            labels=tuple(args.label),
            window=args.window or "final",
        )
        figure = render_job(job)
        plt.close(figure)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
