"""Uniform dyadic grid on the torus [0, 1) and piecewise-constant functions on it.

All integrals in the package are exact sums over cells: a function is its
vector of cell values, an interval is a set of consecutive (possibly
wrapped) cells, and the average over an interval is an exact rational
combination of cell values evaluated in float64 via prefix sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidIntervalError


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid of 2**level_count cells covering [0, 1)."""

    level_count: int

    def __post_init__(self):
        if self.level_count < 2:
            raise ValueError("level_count must be >= 2")

    @property
    def ncells(self) -> int:
        return 1 << self.level_count

    @property
    def cell_width(self) -> float:
        return 1.0 / self.ncells


@dataclass(eq=False)
class GridFunction:
    """Piecewise-constant function on a torus grid.

    Values are frozen after construction; the prefix-sum table used for
    interval averages is built lazily and shared by all queries.
    """

    grid: TorusGrid
    values: np.ndarray
    kind: str = "real"
    _prefix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise ValueError(f"unknown kind {self.kind!r}")
        dtype = np.complex128 if self.kind == "complex" else np.float64
        vals = np.asarray(self.values, dtype=dtype)
        if vals.shape != (self.grid.ncells,):
            raise ValueError(
                f"expected {self.grid.ncells} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.flags.writeable = False
        self.values = vals

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    def prefix(self) -> np.ndarray:
        """Prefix sums over the doubled cell array, P[i] = sum(values[:i] wrapped)."""
        if self._prefix is None:
            doubled = np.concatenate([self.values, self.values])
            self._prefix = np.concatenate([[0.0], np.cumsum(doubled)])
        return self._prefix

    def with_values(self, values: np.ndarray, kind: str | None = None) -> "GridFunction":
        return GridFunction(self.grid, values, kind or self.kind)


class Weight(GridFunction):
    """Non-negative grid function with at least one positive value."""

    def __post_init__(self):
        if self.kind != "real":
            raise ValueError("weights are real-valued")
        super().__post_init__()
        if np.any(self.values < 0):
            raise ValueError("weight values must be non-negative")
        if not np.any(self.values > 0):
            raise ValueError("weight must be positive somewhere")


def as_weight(f: GridFunction) -> Weight:
    if isinstance(f, Weight):
        return f
    return Weight(f.grid, f.values)


@dataclass(frozen=True)
class DyadicInterval:
    """Dyadic interval [index * 2**-level, (index + 1) * 2**-level)."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if not 0 <= self.index < (1 << self.level):
            raise ValueError(f"index {self.index} out of range at level {self.level}")

    @property
    def measure(self) -> float:
        return 2.0 ** (-self.level)

    def cell_interval(self, grid: TorusGrid) -> "CellInterval":
        if self.level > grid.level_count:
            raise InvalidIntervalError(
                f"level {self.level} exceeds grid depth {grid.level_count}"
            )
        width = 1 << (grid.level_count - self.level)
        return CellInterval(self.index * width, width)

    def contains(self, other: "DyadicInterval") -> bool:
        if other.level < self.level:
            return False
        return (other.index >> (other.level - self.level)) == self.index


@dataclass(frozen=True)
class CellInterval:
    """Run of `length` consecutive cells starting at `start`, wrapping mod N."""

    start: int
    length: int

    def validate(self, grid: TorusGrid) -> None:
        if not 1 <= self.length <= grid.ncells:
            raise InvalidIntervalError(
                f"length {self.length} invalid on grid of {grid.ncells} cells"
            )
        if not 0 <= self.start < grid.ncells:
            raise InvalidIntervalError(f"start {self.start} out of range")

    def measure(self, grid: TorusGrid) -> float:
        return self.length * grid.cell_width

    def cells(self, grid: TorusGrid) -> np.ndarray:
        """Cell indices covered, in traversal order from `start`."""
        self.validate(grid)
        return (self.start + np.arange(self.length)) % grid.ncells

    def contains_cell(self, cell: int, grid: TorusGrid) -> bool:
        offset = (cell - self.start) % grid.ncells
        return offset < self.length

    def indicator(self, grid: TorusGrid) -> np.ndarray:
        mask = np.zeros(grid.ncells, dtype=bool)
        mask[self.cells(grid)] = True
        return mask


def restrict(f: GridFunction, interval: CellInterval) -> np.ndarray:
    """Values of f over the interval's cells, in traversal order."""
    return f.values[interval.cells(f.grid)]


def interval_sum(f: GridFunction, interval: CellInterval):
    """Exact sum of cell values over the interval, via prefix sums."""
    interval.validate(f.grid)
    p = f.prefix()
    return p[interval.start + interval.length] - p[interval.start]


def interval_average(f: GridFunction, interval: CellInterval):
    """Mean cell value over the interval; equals (1/|I|) * integral of f."""
    return interval_sum(f, interval) / interval.length


def dilate(q: CellInterval, factor: float, grid: TorusGrid) -> CellInterval:
    """Concentric enlargement of q by `factor`, clipped to the full torus.

    Frozen convention: the new length is round-half-up(factor * length)
    capped at N, and the start moves left by floor((new - old) / 2), which
    rounds the half-cell ambiguity toward the original start.
    """
    if factor < 1:
        raise ValueError("dilation factor must be >= 1")
    q.validate(grid)
    n = grid.ncells
    new_length = int(np.floor(factor * q.length + 0.5))
    if new_length >= n:
        return CellInterval(0, n)
    new_start = (q.start - (new_length - q.length) // 2) % n
    return CellInterval(new_start, new_length)


def dyadic_descendants(q: DyadicInterval, grid: TorusGrid) -> list[DyadicInterval]:
    """The two children of q one level down; empty at the leaf level."""
    if q.level > grid.level_count:
        raise InvalidIntervalError("interval deeper than grid")
    if q.level == grid.level_count:
        return []
    return [
        DyadicInterval(q.level + 1, 2 * q.index),
        DyadicInterval(q.level + 1, 2 * q.index + 1),
    ]


def constant(grid: TorusGrid, value: float) -> GridFunction:
    return GridFunction(grid, np.full(grid.ncells, value, dtype=np.float64))


def indicator(grid: TorusGrid, interval: CellInterval) -> GridFunction:
    return GridFunction(grid, interval.indicator(grid).astype(np.float64))


def integral(f: GridFunction):
    """Integral over the torus: sum of values times cell width."""
    total = np.sum(f.values) * f.grid.cell_width
    return float(total) if f.is_real else complex(total)


def lp_norm(f: GridFunction, p: float) -> float:
    """Discretized L^p norm (sum |f|^p h)^(1/p)."""
    h = f.grid.cell_width
    if p == np.inf:
        return float(np.max(np.abs(f.values)))
    return float((np.sum(np.abs(f.values) ** p) * h) ** (1.0 / p))


def weighted_lp_power(f: GridFunction, w: GridFunction, p: float) -> float:
    """Discretized integral of |f|^p w."""
    h = f.grid.cell_width
    return float(np.sum(np.abs(f.values) ** p * w.values) * h)
