"""Rearrangements, medians, local mean oscillation, and the sparse decomposition.

The decomposition is a stopping-time construction: starting from a root
dyadic interval it selects, at each node, the maximal strict dyadic
descendants on which the function either concentrates its large
deviations (density rule) or shifts its median by more than a multiple of
the local oscillation (jump rule).  Each node keeps ownership of at least
half of its cells, which is asserted, not assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import SparseConstructionError
from .grid import (
    CellInterval,
    DyadicInterval,
    GridFunction,
    TorusGrid,
    dyadic_descendants,
    restrict,
)


def rearrangement_quantile(g: GridFunction, q: CellInterval, t: float) -> float:
    """Value of the non-increasing rearrangement of |g| restricted to q at measure t.

    With m cells in q and k = floor(t / h), returns the (k+1)-th largest
    |value| on q, or 0 once t covers the whole interval.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    q.validate(g.grid)
    m = q.length
    k = int(np.floor(t / g.grid.cell_width))
    if k >= m:
        return 0.0
    vals = np.sort(np.abs(restrict(g, q)))[::-1]
    return float(vals[k])


def median(f: GridFunction, q: CellInterval) -> float:
    """Lower median of f over q: v[ceil(m/2)] of the ascending sort (1-based).

    The result is checked against both defining count inequalities
    |{f > m}| <= m/2 and |{f < m}| <= m/2.
    """
    if not f.is_real:
        raise TypeError("median requires a real grid function")
    vals = np.sort(restrict(f, q))
    m = vals.size
    med = float(vals[(m + 1) // 2 - 1])
    assert np.count_nonzero(vals > med) <= m / 2
    assert np.count_nonzero(vals < med) <= m / 2
    return med


def local_mean_oscillation(
    f: GridFunction, q: CellInterval, lam: float
) -> tuple[float, float]:
    """Exact local mean oscillation over q and its minimizing constant.

    Minimizes the lam*|q| quantile of |f - c| over c.  With k = floor(lam*m)
    the minimum is attained by centering c in the narrowest window of
    m - k consecutive sorted values, giving (max - min) / 2 over that window.
    """
    if not f.is_real:
        raise TypeError("oscillation requires a real grid function")
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    vals = np.sort(restrict(f, q))
    m = vals.size
    k = int(np.floor(lam * m))
    width = m - k
    spans = vals[width - 1 :] - vals[: m - width + 1]
    i = int(np.argmin(spans))
    omega = float(spans[i] / 2.0)
    center = float((vals[i] + vals[i + width - 1]) / 2.0)
    return omega, center


@dataclass(frozen=True)
class DecompositionConfig:
    """Parameters of the stopping-time construction."""

    lam: float = 0.125
    density_threshold: float = 0.5
    jump_multiplier: float = 2.0
    max_depth: int | None = None

    def __post_init__(self):
        if not 0 < self.lam <= 0.5:
            raise ValueError("lam must lie in (0, 1/2]")
        if not 0 < self.density_threshold <= 1:
            raise ValueError("density_threshold must lie in (0, 1]")
        if self.jump_multiplier < 1:
            raise ValueError("jump_multiplier must be >= 1")


@dataclass
class SparseNode:
    interval: DyadicInterval
    e_cells: np.ndarray
    median: float
    omega: float
    parent: int


@dataclass
class SparseFamily:
    """Tree of dyadic intervals with disjoint owned-cell sets."""

    root: DyadicInterval
    grid: TorusGrid
    nodes: list[SparseNode] = field(default_factory=list)

    def verify_structure(self) -> None:
        """Asserts disjoint E sets, |E(Q)| >= |Q|/2, and child nesting."""
        seen = np.zeros(self.grid.ncells, dtype=bool)
        for i, node in enumerate(self.nodes):
            size = node.interval.cell_interval(self.grid).length
            if 2 * node.e_cells.size < size:
                raise SparseConstructionError(
                    f"node {i} owns {node.e_cells.size} of {size} cells", node=node
                )
            if np.any(seen[node.e_cells]):
                raise SparseConstructionError(f"node {i} overlaps earlier E set", node=node)
            seen[node.e_cells] = True
            if node.parent >= 0:
                parent = self.nodes[node.parent]
                if not (
                    parent.interval.contains(node.interval)
                    and node.interval.level > parent.interval.level
                ):
                    raise SparseConstructionError(
                        f"node {i} is not a strict descendant of its parent", node=node
                    )

    def to_json(self) -> str:
        payload = {
            "root": {"level": self.root.level, "index": self.root.index},
            "grid_levels": self.grid.level_count,
            "nodes": [
                {
                    "level": n.interval.level,
                    "index": n.interval.index,
                    "e_cells": _run_length_encode(n.e_cells),
                    "median": n.median,
                    "omega": n.omega,
                    "parent": n.parent,
                }
                for n in self.nodes
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SparseFamily":
        payload = json.loads(text)
        grid = TorusGrid(payload["grid_levels"])
        fam = cls(
            root=DyadicInterval(payload["root"]["level"], payload["root"]["index"]),
            grid=grid,
        )
        for n in payload["nodes"]:
            fam.nodes.append(
                SparseNode(
                    interval=DyadicInterval(n["level"], n["index"]),
                    e_cells=_run_length_decode(n["e_cells"]),
                    median=n["median"],
                    omega=n["omega"],
                    parent=n["parent"],
                )
            )
        return fam


def _run_length_encode(cells: np.ndarray) -> list[list[int]]:
    if cells.size == 0:
        return []
    cells = np.sort(cells)
    breaks = np.nonzero(np.diff(cells) != 1)[0]
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [cells.size - 1]])
    return [[int(cells[a]), int(cells[b] - cells[a] + 1)] for a, b in zip(starts, ends)]


def _run_length_decode(runs: list[list[int]]) -> np.ndarray:
    if not runs:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([start + np.arange(length) for start, length in runs])


def sparse_decompose(
    f: GridFunction,
    root: DyadicInterval,
    cfg: DecompositionConfig | None = None,
) -> SparseFamily:
    """Stopping-time sparse decomposition of f below the root interval.

    Children of a selected node Q are the maximal strict dyadic descendants
    P with either |P & Omega(Q)| > d0 |P| (Omega holds the cells whose
    deviation from the median exceeds the lam-quantile) or a median jump
    beyond jump_multiplier times the local oscillation of Q.
    """
    if not f.is_real:
        raise TypeError("decomposition requires a real grid function")
    cfg = cfg or DecompositionConfig()
    grid = f.grid
    max_depth = cfg.max_depth if cfg.max_depth is not None else grid.level_count
    family = SparseFamily(root=root, grid=grid)

    def block_values(q: DyadicInterval) -> np.ndarray:
        ci = q.cell_interval(grid)
        return f.values[ci.start : ci.start + ci.length]

    def node_stats(q: DyadicInterval) -> tuple[float, float]:
        ci = q.cell_interval(grid)
        med = median(f, ci)
        omega, _ = local_mean_oscillation(f, ci, cfg.lam)
        return med, omega

    def process(q: DyadicInterval, parent_idx: int) -> None:
        ci = q.cell_interval(grid)
        med, omega = node_stats(q)
        vals = block_values(q)
        dev = np.abs(vals - med)
        m = vals.size
        k = int(np.floor(cfg.lam * m))
        if k >= m:
            threshold = 0.0
        else:
            threshold = float(np.sort(dev)[::-1][k])
        outliers = dev > threshold
        out_prefix = np.concatenate([[0], np.cumsum(outliers)])

        children: list[DyadicInterval] = []

        def scan(p: DyadicInterval) -> None:
            if p.level > max_depth:
                return
            pci = p.cell_interval(grid)
            lo = pci.start - ci.start
            hit = out_prefix[lo + pci.length] - out_prefix[lo]
            selected = hit > cfg.density_threshold * pci.length
            if not selected:
                p_med = median(f, pci)
                selected = abs(p_med - med) > cfg.jump_multiplier * omega
            if selected:
                children.append(p)
                return
            for child in dyadic_descendants(p, grid):
                scan(child)

        if q.level < max_depth:
            for child in dyadic_descendants(q, grid):
                scan(child)

        owned = np.ones(m, dtype=bool)
        for p in children:
            pci = p.cell_interval(grid)
            owned[pci.start - ci.start : pci.start - ci.start + pci.length] = False
        e_cells = ci.start + np.nonzero(owned)[0]
        idx = len(family.nodes)
        family.nodes.append(
            SparseNode(interval=q, e_cells=e_cells, median=med, omega=omega, parent=parent_idx)
        )
        for p in children:
            process(p, idx)

    process(root, -1)
    family.verify_structure()
    return family


def verify_domination(f: GridFunction, family: SparseFamily) -> tuple[float, int]:
    """Empirical constant in |f - m_f(root)| <= C * sum of node oscillations.

    Returns the max over root cells of deviation / accumulated oscillation
    (0/0 counts as 0) and the cell attaining it.
    """
    grid = f.grid
    root_ci = family.root.cell_interval(grid)
    omega_sum = np.zeros(grid.ncells + 1)
    for node in family.nodes:
        ci = node.interval.cell_interval(grid)
        omega_sum[ci.start] += node.omega
        omega_sum[ci.start + ci.length] -= node.omega
    omega_sum = np.cumsum(omega_sum[:-1])

    root_med = family.nodes[0].median
    cells = root_ci.cells(grid)
    deviation = np.abs(f.values[cells] - root_med)
    denom = omega_sum[cells]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(deviation == 0, 0.0, deviation / denom)
    worst = int(np.argmax(ratios))
    return float(ratios[worst]), int(cells[worst])
