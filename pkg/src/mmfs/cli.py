"""Command-line front door: generate corpus data, apply operators, run experiments.

Exit codes: 0 success, 2 usage or config errors, 3 data errors,
4 internal invariant breaches (broken bounds, failed audits).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io as sig_io
from .corpus import make_weight, parse_family, trial_rng
from .errors import DegenerateTrialError, MmfsError, SignalFormatError
from .grid import TorusGrid, Weight
from .harness import ExperimentSpec, run_experiment, write_jsonl
from .maximal import parse_maximal_spec
from .operators import (
    bv_maximal_multiplier,
    carleson,
    hilbert_transform,
    integer_coeff_grid,
    lacunary_carleson,
    polynomial_carleson,
    random_bv_family,
    walsh_carleson,
)
from .young import condition_1_10_check, parse_young

USAGE_ERROR = 2
DATA_ERROR = 3
INTERNAL_ERROR = 4


def cmd_gen(args) -> int:
    parse_family(args.family)
    grid = TorusGrid(args.J)
    rng = trial_rng(args.seed, 0)
    w = make_weight(grid, args.family, rng)
    sig_io.write_signal(w, args.out)
    print(f"wrote {args.out}: family={args.family} J={args.J} seed={args.seed}")
    return 0


def _apply_operator(spec: str, f):
    import math

    import numpy as np

    if spec in ("M",) or spec.startswith(("M^k:", "Ms:", "MA:")):
        return parse_maximal_spec(spec).apply(Weight(f.grid, np.abs(f.values)))
    if spec == "hilbert":
        return hilbert_transform(f)
    if spec == "carleson":
        return carleson(f)
    if spec == "walsh":
        return walsh_carleson(f)
    if spec.startswith("lacunary:"):
        theta_s, base_s = spec.split(":", 1)[1].split(",")
        theta, lam = float(theta_s), int(base_s)
        lams = []
        while lam <= f.grid.ncells // 4:
            lams.append(lam)
            lam = max(lam + 1, int(math.ceil(lam * theta)))
        return lacunary_carleson(f, lams, theta)
    if spec.startswith("bvmult:"):
        count_s, seed_s = spec.split(":", 1)[1].split(",")
        return bv_maximal_multiplier(f, random_bv_family(int(count_s), int(seed_s)))
    if spec.startswith("polycarleson:"):
        d_s, radius_s = spec.split(":", 1)[1].split(",")
        return polynomial_carleson(f, int(d_s), integer_coeff_grid(int(d_s), int(radius_s)))
    raise ValueError(f"unknown operator spec {spec!r}")


def cmd_apply(args) -> int:
    f = sig_io.read_signal(args.infile)
    out = _apply_operator(args.op, f)
    sig_io.write_signal(out, args.out)
    meta = {
        "op": args.op,
        "input": args.infile,
        "output": args.out,
        "J": out.grid.level_count,
        "kind": out.kind,
    }
    print(json.dumps(meta), file=sys.stderr)
    return 0


def parse_config(path) -> ExperimentSpec:
    """key=value experiment configs; '#' starts a comment."""
    fields = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            fields[key] = value
    return spec_from_fields(fields)


def spec_from_fields(fields: dict) -> ExperimentSpec:
    if "kind" not in fields:
        raise ValueError("config must set kind=...")
    converters = {
        "p": float, "q": float, "r": float, "s": float, "delta": float, "lam": float,
        "k": int, "levels": int, "trials": int, "seed": int, "budget": int,
        "components": int, "n_sparse_families": int, "workers": int,
        "kind": str, "operator": str, "maximal": str,
        "young_a": str, "young_b": str, "young_gamma": str,
    }
    kwargs = {}
    for key, value in fields.items():
        if key == "families":
            kwargs[key] = tuple(tok.strip() for tok in value.split(",") if tok.strip())
        elif key == "eps":
            kwargs["eps_list"] = tuple(float(tok) for tok in value.split(",") if tok.strip())
        elif key in converters:
            kwargs[key] = converters[key](value)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ExperimentSpec(**kwargs)


def cmd_experiment(args) -> int:
    try:
        spec = parse_config(args.config)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    records = run_experiment(spec)
    write_jsonl(records, args.out)
    max_ratio = max((rec.ratio for rec in records), default=0.0)
    print(f"kind={spec.kind} trials={len(records)} max_ratio={max_ratio:.17g}")
    return 0


def cmd_bp_check(args) -> int:
    young = parse_young(args.young)
    verdict = condition_1_10_check(young, args.p)
    print(
        f"{verdict.verdict} partial_integral={verdict.partial_integral:.12g} "
        f"evidence: {verdict.tail_evidence}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmfs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a corpus weight file")
    p_gen.add_argument("family", help="lognormal | bump:eps | power:a | two-bump")
    p_gen.add_argument("--J", type=int, default=8)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="weight.csv")
    p_gen.set_defaults(fn=cmd_gen)

    p_apply = sub.add_parser("apply", help="apply an operator to a signal file")
    p_apply.add_argument("op", help="M | M^k:3 | Ms:1.5 | MA:logpow:2 | hilbert | carleson | "
                                    "walsh | lacunary:theta,base | bvmult:K,seed | polycarleson:d,grid")
    p_apply.add_argument("--in", dest="infile", required=True)
    p_apply.add_argument("--out", default="out.csv")
    p_apply.set_defaults(fn=cmd_apply)

    p_exp = sub.add_parser("experiment", help="run an experiment config to JSONL")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--out", default="results.jsonl")
    p_exp.set_defaults(fn=cmd_experiment)

    p_bp = sub.add_parser("bp-check", help="integral-condition verdict for a Young function")
    p_bp.add_argument("young", help="power:a | logpow:k")
    p_bp.add_argument("--p", type=float, required=True)
    p_bp.set_defaults(fn=cmd_bp_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SignalFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (DegenerateTrialError, AssertionError) as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except (ValueError, MmfsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
