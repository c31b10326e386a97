"""Small CLI wrapper: ``npfigures --kind power-curve --output fig.svg data.csv``."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="npfigures", description=__doc__)
    parser.add_argument("inputs", nargs="+", help="input CSV file(s)")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--output", required=True, help="output image path (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(inputs=tuple(args.inputs), kind=args.kind, output=args.output))
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
