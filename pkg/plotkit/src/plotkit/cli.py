"""Command-line renderer: ``plot <kind> <csv> -o <png>``.

Exit code 0 on success (including the blank-axes path for empty grids,
which prints a warning to stderr); 1 with a JSON error line on stderr
otherwise, mirroring the grmsim CLI convention.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__
from .recipes import KINDS, FigureRecipe, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a grmsim CSV into a deterministic PNG figure.",
    )
    parser.add_argument("--version", action="version", version=f"plot {__version__}")
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("csv", help="input CSV (manifest line + header + rows)")
    parser.add_argument("-o", "--out", required=True, help="output PNG path")
    parser.add_argument("--title", default=None, help="override the figure title")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    recipe = FigureRecipe(
        kind=args.kind, csv_path=args.csv, out_path=args.out, title=args.title
    )
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            render(recipe)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
