"""Figure and table rendering from validated records."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .schema import Record, read_records  # noqa: E402


@dataclass
class ReportBundle:
    inputs: list
    out_dir: Path
    kinds: list | None = None
    manifest: dict = field(default_factory=dict)

    def __post_init__(self):
        self.inputs = [Path(p) for p in self.inputs]
        self.out_dir = Path(self.out_dir)


def _group_by_kind(records):
    groups: dict[str, list[Record]] = {}
    for rec in records:
        groups.setdefault(rec.kind, []).append(rec)
    return groups


def write_summary(groups, path) -> None:
    """Constants table: one row per kind with the trial count and max ratio."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "records", "max_ratio"])
        for kind in sorted(groups):
            ratios = [rec.ratio for rec in groups[kind]]
            writer.writerow([kind, len(ratios), f"{max(ratios):.17g}"])


def plot_sharpness(records, path) -> None:
    """Log-log ratio-vs-eps curves for both iteration counts."""
    rows = sorted(records, key=lambda rec: -rec.params["eps"])
    eps = [rec.params["eps"] for rec in rows]
    low = [rec.params["ratio_klow"] for rec in rows]
    high = [rec.params["ratio_khigh"] for rec in rows]
    k_low = rows[0].params["k_low"]
    k_high = rows[0].params["k_high"]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.loglog(eps, low, "o-", label=f"k = {k_low}")
    ax.loglog(eps, high, "s--", label=f"k = {k_high}")
    ax.invert_xaxis()
    ax.set_xlabel("bump width")
    ax.set_ylabel("best weighted ratio")
    ax.set_title("sharpness probe: iterated maximal control")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_histogram(kind, records, path) -> None:
    ratios = [rec.ratio for rec in records]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.hist(ratios, bins=min(30, max(5, len(ratios) // 3)), color="#3465a4", alpha=0.85)
    ax.set_xlabel("ratio")
    ax.set_ylabel("trials")
    ax.set_title(f"{kind}: {len(ratios)} records, max {max(ratios):.6g}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render(bundle: ReportBundle) -> dict:
    """Render figures and summary.csv; returns the manifest of written files."""
    records = []
    for path in bundle.inputs:
        records.extend(read_records(path))
    if bundle.kinds:
        wanted = set(bundle.kinds)
        records = [rec for rec in records if rec.kind in wanted]
    groups = _group_by_kind(records)

    bundle.out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    summary = bundle.out_dir / "summary.csv"
    write_summary(groups, summary)
    written["summary"] = summary

    for kind in sorted(groups):
        recs = groups[kind]
        if kind == "SHARPNESS" and all("eps" in rec.params for rec in recs):
            target = bundle.out_dir / "sharpness.svg"
            plot_sharpness(recs, target)
            written["sharpness"] = target
        target = bundle.out_dir / f"hist_{kind.lower()}.svg"
        plot_histogram(kind, recs, target)
        written[f"hist_{kind.lower()}"] = target
    bundle.manifest = {name: str(path) for name, path in written.items()}
    return written
