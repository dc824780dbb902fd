"""Singular and maximally modulated operators on the discrete torus.

Conventions: the DFT coefficient of signed frequency k is fft(values)[k mod N]/N,
so f(x_j) = sum_k c_k exp(2 pi i k j / N) with k running over -N/2 < k <= N/2.
The Hilbert multiplier is -i sign(k) with the Nyquist bin zeroed, which keeps
real inputs real.  Partial-sum operators accumulate symmetric frequency shells
in a fixed ascending order; the double-loop oracles in the test suite replay
exactly that order, so agreement is required to be bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, Weight

_exp_cache: dict[int, np.ndarray] = {}
_walsh_cache: dict[int, np.ndarray] = {}


def character_matrix(n: int) -> np.ndarray:
    """Rows E[m, j] = exp(2 pi i m j / n) for m = 0..n/2, cached per grid size."""
    mat = _exp_cache.get(n)
    if mat is None:
        m = np.arange(n // 2 + 1)[:, None]
        j = np.arange(n)[None, :]
        mat = np.exp(2j * np.pi * m * j / n)
        mat.flags.writeable = False
        _exp_cache[n] = mat
    return mat


def fourier_coefficients(f: GridFunction) -> np.ndarray:
    """c[k] for bins 0..N-1; signed frequency of bin k is k for k <= N/2 else k - N."""
    return np.fft.fft(f.values) / f.grid.ncells


def hilbert_transform(f: GridFunction) -> GridFunction:
    """Frequency multiplier -i sign(k); sign(0) = 0 and the Nyquist bin is zeroed."""
    n = f.grid.ncells
    spec = np.fft.fft(f.values)
    mult = np.zeros(n, dtype=np.complex128)
    mult[1 : n // 2] = -1j
    mult[n // 2 + 1 :] = 1j
    out = np.fft.ifft(mult * spec)
    if f.is_real:
        assert np.max(np.abs(out.imag)) < 1e-12 * max(1.0, np.max(np.abs(out.real)))
        return GridFunction(f.grid, out.real, "real")
    return GridFunction(f.grid, out, "complex")


def carleson(f: GridFunction) -> Weight:
    """Max over cutoffs m in [0, N/2] of |sum_{|k| <= m} c_k e_k(x)|.

    Shell m adds the +m and -m coefficients at once (the Nyquist shell only
    once); the running partial sum is updated incrementally, O(N^2) total.
    """
    n = f.grid.ncells
    coeffs = fourier_coefficients(f)
    chars = character_matrix(n)
    partial = np.full(n, coeffs[0], dtype=np.complex128)
    out = np.abs(partial)
    for m in range(1, n // 2 + 1):
        shell = coeffs[m] * chars[m]
        if m < n - m:
            shell = shell + coeffs[n - m] * np.conj(chars[m])
        partial = partial + shell
        np.maximum(out, np.abs(partial), out=out)
    return Weight(f.grid, out)


def modulated_sup(f: GridFunction, freqs) -> Weight:
    """Max over modulation frequencies of |H(e^{2 pi i a x} f)|."""
    freqs = list(freqs)
    if not freqs:
        raise ValueError("modulation frequency set is empty")
    n = f.grid.ncells
    j = np.arange(n)
    out = np.zeros(n)
    for alpha in freqs:
        phase = np.exp(2j * np.pi * alpha * j / n)
        g = GridFunction(f.grid, phase * f.values, "complex")
        np.maximum(out, np.abs(hilbert_transform(g).values), out=out)
    return Weight(f.grid, out)


def lacunary_carleson(f: GridFunction, lams, theta: float) -> Weight:
    """Modulated supremum over a lacunary integer sequence (validated)."""
    lams = [int(x) for x in lams]
    if not lams:
        raise ValueError("lacunary sequence is empty")
    if theta <= 1:
        raise ValueError("lacunarity constant theta must exceed 1")
    for a, b in zip(lams, lams[1:]):
        if b <= a:
            raise ValueError("sequence must be strictly increasing")
        if b < theta * a:
            raise ValueError(f"{b} < {theta} * {a}: sequence is not theta-lacunary")
    return modulated_sup(f, lams)


# ---------------------------------------------------------------------------
# Walsh-Paley machinery


def bit_reverse_permutation(levels: int) -> np.ndarray:
    idx = np.arange(1 << levels, dtype=np.uint64)
    rev = np.zeros_like(idx)
    for _ in range(levels):
        rev = (rev << np.uint64(1)) | (idx & np.uint64(1))
        idx >>= np.uint64(1)
    return rev.astype(np.int64)


def walsh_matrix(levels: int) -> np.ndarray:
    """Rows w_m over cells, Walsh-Paley order: w_m(i) = (-1)^popcount(m & rev(i))."""
    n = 1 << levels
    mat = _walsh_cache.get(n)
    if mat is None:
        rev = bit_reverse_permutation(levels).astype(np.uint64)
        m = np.arange(n, dtype=np.uint64)[:, None]
        parity = np.bitwise_count(m & rev[None, :]) & np.uint64(1)
        mat = 1.0 - 2.0 * parity.astype(np.float64)
        mat.flags.writeable = False
        _walsh_cache[n] = mat
    return mat


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, natural (bit-AND) order."""
    a = np.array(values, dtype=np.float64)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(n // (2 * h), 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.concatenate([top[:, None, :], bot[:, None, :]], axis=1).reshape(n)
        h *= 2
    return a


def walsh_coefficients(f: GridFunction) -> np.ndarray:
    """Walsh-Paley coefficients via FWHT of the bit-reversed sample order."""
    if not f.is_real:
        raise TypeError("Walsh analysis expects a real grid function")
    rev = bit_reverse_permutation(f.grid.level_count)
    return fwht(f.values[rev]) / f.grid.ncells


def walsh_partial_sum(f: GridFunction, terms: int) -> GridFunction:
    """W_n f = sum_{m < n} of Walsh coefficient m times character m."""
    if not 1 <= terms <= f.grid.ncells:
        raise ValueError("partial-sum length out of range")
    coeffs = walsh_coefficients(f)
    chars = walsh_matrix(f.grid.level_count)
    return GridFunction(f.grid, coeffs[:terms] @ chars[:terms])


def walsh_carleson(f: GridFunction) -> Weight:
    """Max over n in [1, N] of |W_n f|, accumulated character by character."""
    n = f.grid.ncells
    coeffs = walsh_coefficients(f)
    chars = walsh_matrix(f.grid.level_count)
    partial = np.zeros(n)
    out = np.zeros(n)
    for m in range(n):
        partial = partial + coeffs[m] * chars[m]
        np.maximum(out, np.abs(partial), out=out)
    return Weight(f.grid, out)


# ---------------------------------------------------------------------------
# Bounded-variation maximal multiplier


@dataclass(frozen=True)
class MultiplierBV:
    """Piecewise-constant frequency multiplier with bounded variation norm.

    values[i] applies on signed frequencies [breakpoints[i], breakpoints[i+1]),
    extended by values[0] below the first breakpoint and values[-1] at and
    above the last.  bv_norm = sup |m| + total variation.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need one more value than breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def bv_norm(self) -> float:
        vals = np.asarray(self.values, dtype=np.float64)
        return float(np.max(np.abs(vals)) + np.sum(np.abs(np.diff(vals))))

    def normalized(self) -> "MultiplierBV":
        scale = self.bv_norm
        if scale == 0:
            raise ValueError("zero multiplier cannot be normalized")
        return MultiplierBV(self.breakpoints, tuple(v / scale for v in self.values))

    def sample_bins(self, n: int) -> np.ndarray:
        """Multiplier value per DFT bin of a length-n transform."""
        signed = np.where(np.arange(n) <= n // 2, np.arange(n), np.arange(n) - n)
        idx = np.searchsorted(np.asarray(self.breakpoints), signed, side="right")
        return np.asarray(self.values, dtype=np.float64)[idx]

    def apply(self, f: GridFunction) -> GridFunction:
        n = f.grid.ncells
        spec = np.fft.fft(f.values) * self.sample_bins(n)
        return GridFunction(f.grid, np.fft.ifft(spec), "complex")


def bv_maximal_multiplier(f: GridFunction, family) -> Weight:
    """Max over a finite family of BV-normalized multipliers of |(m fhat)^lor|.

    A finite family gives a lower approximation of the full supremum over
    the unit bounded-variation ball.
    """
    family = list(family)
    if not family:
        raise ValueError("multiplier family is empty")
    out = np.zeros(f.grid.ncells)
    for mult in family:
        if mult.bv_norm > 1 + 1e-9:
            raise ValueError(f"multiplier bv_norm {mult.bv_norm:.6g} exceeds 1")
        np.maximum(out, np.abs(mult.apply(f).values), out=out)
    return Weight(f.grid, out)


def random_bv_family(count: int, seed: int, max_jumps: int = 6) -> list[MultiplierBV]:
    """Seeded family of random step multipliers, each normalized to bv_norm 1."""
    rng = np.random.default_rng([seed, 0xB5])
    family = []
    for _ in range(count):
        njumps = int(rng.integers(1, max_jumps + 1))
        breaks = np.sort(rng.integers(-512, 513, size=njumps))
        breaks = tuple(int(b) for b in np.unique(breaks))
        vals = tuple(float(v) for v in rng.normal(size=len(breaks) + 1))
        family.append(MultiplierBV(breaks, vals).normalized())
    return family


# ---------------------------------------------------------------------------
# Polynomial Carleson (sampled coefficient lattice, a lower bound for the sup)


def polynomial_carleson(f: GridFunction, degree: int, coeff_grid) -> Weight:
    """Max over sampled phase polynomials of |H(e^{i P} f)|.

    P(x) = 2 pi sum_j c_j x^j for coefficient vectors c in coeff_grid, so a
    degree-1 lattice of integers reproduces modulated_sup on those integers.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    coeff_list = [tuple(float(v) for v in c) for c in coeff_grid]
    if not coeff_list:
        raise ValueError("coefficient grid is empty")
    if not any(all(v == 0 for v in c) for c in coeff_list):
        raise ValueError("coefficient grid must contain the zero polynomial")
    if any(len(c) != degree for c in coeff_list):
        raise ValueError("coefficient vectors must have one entry per degree")
    n = f.grid.ncells
    x = np.arange(n) / n
    out = np.zeros(n)
    for coeffs in coeff_list:
        phase = np.zeros(n)
        for j, c in enumerate(coeffs, start=1):
            phase = phase + c * x**j
        g = GridFunction(f.grid, np.exp(2j * np.pi * phase) * f.values, "complex")
        np.maximum(out, np.abs(hilbert_transform(g).values), out=out)
    return Weight(f.grid, out)


def integer_coeff_grid(degree: int, radius: int) -> list[tuple]:
    """Cartesian lattice {-radius..radius}^degree, zero vector included."""
    from itertools import product

    return [c for c in product(range(-radius, radius + 1), repeat=degree)]


# ---------------------------------------------------------------------------
# Vector-valued aggregation and weak-norm measurement


def vector_lq(fs, q: float) -> Weight:
    """Per-cell l^q norm of a sequence of grid functions (max for q = inf)."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty function sequence")
    grid = fs[0].grid
    if any(f.grid != grid for f in fs):
        raise ValueError("grid mismatch in vector aggregation")
    stack = np.abs(np.stack([f.values for f in fs]))
    if q == np.inf:
        return Weight(grid, stack.max(axis=0))
    if q < 1:
        raise ValueError("q must be >= 1")
    return Weight(grid, (stack**q).sum(axis=0) ** (1.0 / q))


def weak_lr_norm(g: GridFunction, r: float) -> float:
    """Discrete weak-L^r norm: max over k of (k-th largest |g|) * (k h)^(1/r)."""
    vals = np.sort(np.abs(g.values))[::-1]
    k = np.arange(1, vals.size + 1)
    return float(np.max(vals * (k * g.grid.cell_width) ** (1.0 / r)))


@dataclass
class OperatorProfile:
    """Measured weak-type profile of an operator: growth psi(r) on (1, r0]."""

    name: str
    r0: float = 2.0
    delta: float = 1.0
    psi_table: dict = field(default_factory=dict)

    def psi(self, r: float) -> float:
        if not self.psi_table:
            raise ValueError("psi table is empty; measure it first")
        rs = sorted(self.psi_table)
        if r <= rs[0]:
            return self.psi_table[rs[0]]
        for lo, hi in zip(rs, rs[1:]):
            if r <= hi:
                frac = (r - lo) / (hi - lo)
                return (1 - frac) * self.psi_table[lo] + frac * self.psi_table[hi]
        return self.psi_table[rs[-1]]


def measure_profile(name: str, apply_op, corpus, rs, r0: float = 2.0, delta: float = 1.0) -> OperatorProfile:
    """Populate psi(r) = sup over the corpus of weak-L^r norm / L^r norm.

    The table is monotonized from the large-r end so psi is nonincreasing,
    which keeps each entry a valid measured upper envelope.
    """
    from .grid import lp_norm

    rs = sorted(rs)
    raw = {}
    for r in rs:
        worst = 0.0
        for f in corpus:
            denom = lp_norm(f, r)
            if denom == 0:
                continue
            worst = max(worst, weak_lr_norm(apply_op(f), r) / denom)
        raw[r] = worst
    table = {}
    running = 0.0
    for r in reversed(rs):
        running = max(running, raw[r])
        table[r] = running
    return OperatorProfile(name=name, r0=r0, delta=delta, psi_table=dict(sorted(table.items())))
