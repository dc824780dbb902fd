"""Command line: report --in results.jsonl --out dir/ [--kinds SHARPNESS,FS_CARLESON]"""

from __future__ import annotations

import argparse
import sys

from .render import ReportBundle, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="report", description=__doc__)
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, help="JSONL result file (repeatable)"
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--kinds", help="comma-separated experiment kinds to include")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()] if args.kinds else None
    bundle = ReportBundle(inputs=args.inputs, out_dir=args.out, kinds=kinds)
    try:
        written = render(bundle)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    for name in sorted(written):
        print(f"{name}: {written[name]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
