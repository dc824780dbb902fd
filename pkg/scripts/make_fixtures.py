"""Freeze pilot-run fixtures for the acceptance suite.

Run from the repository root:  python3 scripts/make_fixtures.py

Writes tests/fixtures/pilot.json (frozen max ratios per battery) and the
golden JSONL files consumed by the CLI and report tests.  Every value here
is reproduced exactly by the acceptance suite; fresh-seed stability checks
live in the tests themselves.
"""

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from mmfs.cli import main as cli_main  # noqa: E402
from mmfs.harness import ExperimentSpec, run_experiment, write_jsonl  # noqa: E402

FIXDIR = ROOT / "tests" / "fixtures"

BATTERIES = {
    "fs_carleson_j9_seed0": dict(
        kind="FS_CARLESON", p=2.0, k=3, levels=9, trials=200, seed=0
    ),
    "mb_fs": dict(kind="MB_FS", p=2.0, levels=6, trials=100, seed=0),
    "reverse_fs": dict(kind="REVERSE_FS", p=2.0, levels=6, trials=100, seed=0),
    "coifman": dict(kind="COIFMAN", delta=0.5, levels=5, trials=100, seed=0),
    "fs_vv": dict(kind="FS_VV", p=2.0, q=2.0, components=3, levels=8, trials=100, seed=0),
    "osc_bound": dict(kind="OSC_BOUND", levels=7, trials=100, seed=0, operator="carleson"),
    "fs_sparse": dict(
        kind="FS_SPARSE", p=2.0, levels=6, trials=100, seed=0, n_sparse_families=20
    ),
}


def family_spread(records):
    sups = {}
    for rec in records:
        idx = rec.params["sparse_family"]
        sups[idx] = max(sups.get(idx, 0.0), rec.ratio)
    values = sorted(sups.values())
    return values[-1] / values[0], sups


def main():
    FIXDIR.mkdir(parents=True, exist_ok=True)
    pilot = {}
    for name, kwargs in BATTERIES.items():
        t0 = time.time()
        records = run_experiment(ExperimentSpec(**kwargs))
        max_ratio = max(rec.ratio for rec in records)
        pilot[name] = {"max_ratio": max_ratio, "spec": kwargs, "trials": len(records)}
        if name == "fs_sparse":
            spread, sups = family_spread(records)
            pilot[name]["spread"] = spread
            pilot[name]["family_sups"] = {str(k): v for k, v in sorted(sups.items())}
        print(f"{name}: max_ratio={max_ratio:.12g}  ({time.time() - t0:.1f}s)")

    (FIXDIR / "pilot.json").write_text(json.dumps(pilot, indent=2, sort_keys=True) + "\n")

    # golden JSONL for the CLI comparison test (small, fast config)
    cfg = FIXDIR / "golden_fs_carleson.cfg"
    cfg.write_text("kind=FS_CARLESON\np=2\nk=3\nlevels=6\ntrials=10\nseed=0\n")
    rc = cli_main(
        ["experiment", "--config", str(cfg), "--out", str(FIXDIR / "golden_fs_carleson.jsonl")]
    )
    assert rc == 0

    # sharpness fixture consumed by the report component
    sharp = run_experiment(ExperimentSpec(kind="SHARPNESS", levels=9, budget=60, seed=0))
    write_jsonl(sharp, FIXDIR / "golden_sharpness.jsonl")
    print("goldens written to", FIXDIR)


if __name__ == "__main__":
    main()
