"""Seeded generators for the weight corpus and random test functions.

Per-trial randomness is derived from (master seed, trial index) through a
SeedSequence, so trials are independent of evaluation order and any single
record can be regenerated in isolation.
"""

from __future__ import annotations

import numpy as np

from .grid import GridFunction, TorusGrid, Weight

WEIGHT_FAMILIES = ("lognormal", "bump", "power", "two-bump")
BUMP_FLOOR = 1e-9


def trial_rng(master_seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(master_seed), int(trial), int(stream)])


def parse_family(spec: str) -> tuple[str, float | None]:
    """Family spec strings: lognormal | bump:eps | power:a | two-bump."""
    name, sep, arg = spec.partition(":")
    if name not in WEIGHT_FAMILIES:
        raise ValueError(f"unknown weight family {name!r}")
    if name in ("bump", "power") and not sep:
        raise ValueError(f"family {name} requires a parameter, e.g. {name}:0.0625")
    return name, float(arg) if sep else None


def bump_weight(grid: TorusGrid, eps: float, start_cell: int = 0) -> Weight:
    """Normalized indicator bump of width eps, floored at a tiny positive level."""
    n = grid.ncells
    width = max(1, int(round(eps * n)))
    vals = np.full(n, BUMP_FLOOR)
    cells = (start_cell + np.arange(width)) % n
    vals[cells] = 1.0 / (width * grid.cell_width)
    return Weight(grid, vals)


def make_weight(grid: TorusGrid, spec: str, rng: np.random.Generator) -> Weight:
    name, arg = parse_family(spec)
    n = grid.ncells
    if name == "lognormal":
        return Weight(grid, np.exp(rng.standard_normal(n)))
    if name == "bump":
        return bump_weight(grid, arg, start_cell=int(rng.integers(n)))
    if name == "power":
        if not 0 < arg < 1:
            raise ValueError("power-family exponent must lie in (0, 1)")
        center = rng.uniform()
        x = (np.arange(n) + 0.5) / n
        dist = np.abs(x - center)
        dist = np.minimum(dist, 1.0 - dist)
        return Weight(grid, np.maximum(dist, grid.cell_width) ** (-arg))
    if name == "two-bump":
        eps1, eps2 = np.exp(rng.uniform(np.log(1 / n), np.log(0.25), size=2))
        w1 = bump_weight(grid, eps1, start_cell=int(rng.integers(n)))
        w2 = bump_weight(grid, eps2, start_cell=int(rng.integers(n)))
        return Weight(grid, 0.5 * (w1.values + w2.values))
    raise AssertionError(name)


def gaussian_function(grid: TorusGrid, rng: np.random.Generator) -> GridFunction:
    return GridFunction(grid, rng.standard_normal(grid.ncells))


def gaussian_vector(grid: TorusGrid, rng: np.random.Generator, count: int) -> list[GridFunction]:
    return [gaussian_function(grid, rng) for _ in range(count)]
