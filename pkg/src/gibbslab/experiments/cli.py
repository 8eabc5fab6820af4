"""Command line interface: `gibbslab <command> --spec spec.json [--out dir]`."""
from __future__ import annotations

import argparse
import pathlib
import sys

from ..errors import GibbsLabError
from .runner import COMMANDS, run_spec
from .spec import load_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gibbslab",
        description="Reproducible desk-scale experiments on Gibbs measures over sparse factor graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in sorted(COMMANDS):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--spec", required=True, help="JSON experiment spec file")
        p.add_argument("--out", default=None, help="output directory (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the spec seed")
        p.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; rows run sequentially")
        p.add_argument("--budget-cap", type=int, default=None, help="override enumeration budget")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        if spec.command != args.command:
            print(
                f"error: spec file declares command {spec.command!r}, CLI invoked {args.command!r}",
                file=sys.stderr,
            )
            return 2
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.budget_cap is not None:
            overrides["budget_cap"] = args.budget_cap
        if overrides:
            spec = type(spec)(**{**spec.__dict__, **overrides})
        if args.out is None:
            run_spec(spec, sys.stdout)
        else:
            outdir = pathlib.Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            ext = "json" if spec.command == "decompose" else "csv"
            path = outdir / f"{spec.command}.{ext}"
            with open(path, "w", encoding="utf8") as fh:
                run_spec(spec, fh)
            print(str(path))
        return 0
    except GibbsLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
