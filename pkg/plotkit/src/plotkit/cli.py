"""plotkit render --spec plot.json"""
from __future__ import annotations

import argparse
import json
import sys

from .render import RenderError, load_plot_spec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plotkit", description="Render gibbslab experiment CSVs to figures.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render a plot spec")
    p.add_argument("--spec", required=True, help="JSON plot spec")
    args = parser.parse_args(argv)
    try:
        paths = render(load_plot_spec(args.spec))
    except (RenderError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
