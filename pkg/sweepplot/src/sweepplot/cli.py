"""Command line interface: plot --csv sweep.csv --fig {angles|chordal|cmd} --out fig.png [--mean]"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render sweep-metric figures from a metrics CSV.")
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument("--fig", required=True, choices=FIGURE_IDS,
                        help="which figure to render")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--mean", action="store_true",
                        help="average over seeds instead of one curve per seed")
    args = parser.parse_args(argv)
    try:
        out = render(FigureSpec(args.csv, args.out, args.fig, args.mean))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
