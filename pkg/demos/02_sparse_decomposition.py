"""Local mean oscillation and the stopping-time sparse decomposition.

A noisy step function is decomposed into a sparse family of dyadic
intervals; the pointwise deviation from the global median is then controlled
by the accumulated oscillations of the nodes covering each cell.
"""

import numpy as np

from mmfs import (
    DyadicInterval,
    TorusGrid,
    local_mean_oscillation,
    median,
    sparse_decompose,
    verify_domination,
)
from mmfs.grid import CellInterval, GridFunction

rng = np.random.default_rng(0)
grid = TorusGrid(9)
n = grid.ncells

# two plateaus plus noise and a handful of spikes
values = np.where(np.arange(n) < n // 2, 1.0, -1.0) + 0.15 * rng.standard_normal(n)
values[rng.integers(0, n, 5)] += 4.0
f = GridFunction(grid, values)

full = CellInterval(0, n)
omega, center = local_mean_oscillation(f, full, 0.125)
print(f"global median  : {median(f, full):+.4f}")
print(f"oscillation    : {omega:.4f} around c* = {center:+.4f}")

family = sparse_decompose(f, DyadicInterval(0, 0))
sizes = {}
for node in family.nodes:
    sizes[node.interval.level] = sizes.get(node.interval.level, 0) + 1
print(f"\nsparse family: {len(family.nodes)} nodes")
for level in sorted(sizes):
    print(f"  level {level:2d}: {sizes[level]:4d} nodes")

constant, worst_cell = verify_domination(f, family)
print(f"\ndomination constant: {constant:.3f} (attained at cell {worst_cell})")
print("every node keeps at least half of its cells; E-sets are disjoint")

# the family serializes to JSON and back
blob = family.to_json()
print(f"serialized family: {len(blob)} bytes of JSON")
