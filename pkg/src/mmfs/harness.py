"""Inequality experiments: weighted-ratio trials, extremal search, sharpness probes.

Every experiment kind reduces to a per-trial evaluation (lhs, rhs) of one
inequality instance; records carry the full parameterization and the seed so
any single trial can be regenerated.  Per-trial randomness is derived from
(master seed, trial index), trials run independently (optionally on a thread
pool), and outputs are ordered by trial index, so results are bitwise
reproducible regardless of scheduling.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .corpus import gaussian_function, gaussian_vector, make_weight, trial_rng, bump_weight
from .errors import DegenerateTrialError
from .grid import (
    CellInterval,
    DyadicInterval,
    GridFunction,
    TorusGrid,
    Weight,
    dilate,
    interval_average,
    lp_norm,
    weighted_lp_power,
)
from .maximal import (
    MaximalSpec,
    hl_maximal,
    iterated_maximal,
    orlicz_maximal,
    power_maximal,
    coifman_rochberg_ratio,
    sparse_operator,
    parse_maximal_spec,
)
from .operators import (
    OperatorProfile,
    bv_maximal_multiplier,
    carleson,
    hilbert_transform,
    integer_coeff_grid,
    lacunary_carleson,
    measure_profile,
    modulated_sup,
    polynomial_carleson,
    random_bv_family,
    vector_lq,
    walsh_carleson,
)
from .oscillation import local_mean_oscillation, sparse_decompose
from .young import YoungFunction, logpow, parse_young, power, power_composed, windowed_luxemburg

KINDS = (
    "FS_M",
    "FS_MS",
    "FS_MK",
    "FS_MA",
    "FS_SPARSE",
    "FS_CARLESON",
    "FS_WALSH",
    "FS_LACUNARY",
    "FS_BV",
    "FS_POLY",
    "FS_VV",
    "MB_STRONG",
    "MB_FS",
    "REVERSE_FS",
    "COIFMAN",
    "TWO_WEIGHT",
    "DUALITY",
    "SHARPNESS",
    "HOLDER",
    "OSC_BOUND",
)

DEFAULT_FAMILIES = ("lognormal", "bump:0.03125", "power:0.4", "two-bump")

# Per-kind default grid depth; Orlicz-heavy kinds run smaller grids because
# the exact all-interval Luxemburg supremum is cubic in N.
DEFAULT_LEVELS = {
    "FS_M": 8,
    "FS_MS": 8,
    "FS_MK": 8,
    "FS_MA": 6,
    "FS_SPARSE": 6,
    "FS_CARLESON": 9,
    "FS_WALSH": 8,
    "FS_LACUNARY": 8,
    "FS_BV": 8,
    "FS_POLY": 6,
    "FS_VV": 8,
    "MB_STRONG": 6,
    "MB_FS": 6,
    "REVERSE_FS": 6,
    "COIFMAN": 5,
    "TWO_WEIGHT": 5,
    "DUALITY": 7,
    "SHARPNESS": 9,
    "HOLDER": 5,
    "OSC_BOUND": 7,
}

SCALE_TOL = 1e-10


def default_r(p: float, r0: float = 2.0) -> float:
    """The proof-mirroring choice r_p = min(r0, (p + 2) / 3)."""
    return min(r0, (p + 2.0) / 3.0)


@dataclass
class ExperimentSpec:
    """Full parameterization of one experiment run."""

    kind: str
    p: float = 2.0
    q: float | None = None
    r: float | None = None
    s: float | None = None
    k: int | None = None
    delta: float | None = None
    lam: float = 0.125
    operator: str = "carleson"
    maximal: str | None = None
    young_a: str | None = None
    young_b: str | None = None
    young_gamma: str | None = None
    levels: int | None = None
    trials: int = 50
    seed: int = 0
    families: tuple = DEFAULT_FAMILIES
    budget: int = 60
    components: int = 3
    n_sparse_families: int = 20
    eps_list: tuple | None = None
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.p <= 1:
            raise ValueError("p must exceed 1")
        if self.levels is None:
            self.levels = DEFAULT_LEVELS[self.kind]
        if self.r is None:
            self.r = default_r(self.p)
        if not 1 < self.r:
            raise ValueError("r must exceed 1")
        if self.kind in ("FS_SPARSE", "TWO_WEIGHT") and not self.r < self.p:
            raise ValueError("r must be < p for sparse/two-weight kinds")
        if self.s is None:
            self.s = 1.5
        if self.kind == "FS_MS" and not 1 < self.s < 2:
            raise ValueError("s must lie in (1, 2)")
        if self.k is None:
            self.k = int(math.floor(self.p)) + 1
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.delta is None:
            self.delta = 0.5
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.q is None:
            self.q = 2.0
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        self.families = tuple(self.families)
        if self.eps_list is not None:
            self.eps_list = tuple(self.eps_list)
            if any(b >= a for a, b in zip(self.eps_list, self.eps_list[1:])):
                raise ValueError("eps sequence must be strictly decreasing")

    def grid(self) -> TorusGrid:
        return TorusGrid(self.levels)


@dataclass
class RatioRecord:
    """One inequality trial: numerator, denominator, and their ratio."""

    kind: str
    params: dict
    seed: int
    trial: int
    lhs: float
    rhs: float
    ratio: float
    files: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "RatioRecord":
        return cls(**json.loads(line))


@dataclass
class SearchResult:
    best: RatioRecord
    iterations: int
    trace: list
    best_f: np.ndarray | None = None
    best_w: np.ndarray | None = None


def _make_record(spec, trial, lhs, rhs, extra=None) -> RatioRecord:
    if rhs == 0 and lhs > 0:
        raise DegenerateTrialError(
            f"{spec.kind} trial {trial}: rhs = 0 with lhs = {lhs:g} (broken maximal bound)"
        )
    params = {
        "p": spec.p,
        "q": spec.q,
        "r": spec.r,
        "s": spec.s,
        "k": spec.k,
        "delta": spec.delta,
        "lam": spec.lam,
        "operator": spec.operator,
        "levels": spec.levels,
        "families": list(spec.families),
    }
    if extra:
        params.update(extra)
    ratio = lhs / rhs if rhs > 0 else 0.0
    return RatioRecord(
        kind=spec.kind, params=params, seed=spec.seed, trial=trial, lhs=lhs, rhs=rhs, ratio=ratio
    )


# ---------------------------------------------------------------------------
# Operator and maximal dispatch


def resolved_operator(spec: ExperimentSpec) -> str:
    """Kind-forced operator names; FS_MK defaults to the plain Hilbert transform."""
    if spec.kind == "FS_WALSH":
        return "walsh"
    if spec.kind in ("FS_CARLESON", "FS_VV", "TWO_WEIGHT", "DUALITY"):
        return "carleson"
    if spec.kind == "FS_MK" and spec.operator == "carleson":
        return "hilbert"
    return spec.operator


def operator_apply(spec: ExperimentSpec, grid: TorusGrid):
    """Callable f -> Weight for the spec's (resolved) operator name."""
    name = resolved_operator(spec)
    n = grid.ncells
    if name == "hilbert":
        return lambda f: Weight(f.grid, np.abs(hilbert_transform(f).values))
    if name == "carleson":
        return carleson
    if name == "walsh":
        return walsh_carleson
    if name.startswith("lacunary:"):
        theta_s, base_s = name.split(":", 1)[1].split(",")
        theta, base = float(theta_s), int(base_s)
        lams, lam = [], base
        while lam <= n // 4:
            lams.append(lam)
            lam = max(lam + 1, int(math.ceil(lam * theta)))
        return lambda f: lacunary_carleson(f, lams, theta)
    if name.startswith("bvmult:"):
        count_s, seed_s = name.split(":", 1)[1].split(",")
        family = random_bv_family(int(count_s), int(seed_s))
        return lambda f: bv_maximal_multiplier(f, family)
    if name.startswith("polycarleson:"):
        d_s, radius_s = name.split(":", 1)[1].split(",")
        grid_c = integer_coeff_grid(int(d_s), int(radius_s))
        return lambda f: polynomial_carleson(f, int(d_s), grid_c)
    raise ValueError(f"unknown operator {name!r}")


def controlling_maximal(spec: ExperimentSpec):
    """Callable w -> Weight for the right-hand-side maximal operator."""
    if spec.maximal is not None:
        return parse_maximal_spec(spec.maximal).apply
    kind = spec.kind
    if kind == "FS_M":
        return hl_maximal
    if kind == "FS_MS":
        return lambda w: power_maximal(w, spec.s)
    if kind == "FS_MA":
        a_young = parse_young(spec.young_a) if spec.young_a else logpow(int(math.floor(spec.p)))
        return lambda w: orlicz_maximal(w, a_young)
    return lambda w: iterated_maximal(w, spec.k)


def _abs_weight(f: GridFunction) -> Weight:
    return Weight(f.grid, np.abs(f.values))


# ---------------------------------------------------------------------------
# Trial evaluations per kind


def _fs_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    """Shared driver for the Fefferman-Stein ratio kinds."""
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    f = gaussian_function(grid, rng)
    apply_op = operator_apply(spec, grid)
    apply_max = controlling_maximal(spec)

    def evaluate(fvals, wvals):
        ff = GridFunction(grid, fvals)
        ww = Weight(grid, wvals)
        tf = apply_op(ff)
        lhs = weighted_lp_power(tf, ww, spec.p)
        rhs = weighted_lp_power(ff, apply_max(ww), spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f.values, w.values)
    _assert_scale_invariance(spec, evaluate, f.values, w.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family})


def _assert_scale_invariance(spec, evaluate, fvals, wvals, lhs, rhs):
    """Homogeneity audit: the ratio must survive f -> 2f, w -> 4w."""
    if rhs == 0:
        return
    l2, r2 = evaluate(2.0 * fvals, 4.0 * wvals)
    if r2 == 0:
        return
    drift = abs((l2 / r2) / (lhs / rhs) - 1.0)
    assert drift <= SCALE_TOL, f"{spec.kind}: scaling drift {drift:.3e}"


def _hilbert_eigen_extremizer(w: Weight, mkw: Weight, iters: int = 80) -> np.ndarray:
    """Converged maximizer of the Hilbert ratio for a fixed weight pair.

    Power iteration on f -> -H(w * Hf) / mkw, started from the kernel row of
    the weight's mass divided by the controlling maximal function.  Fully
    deterministic (no search noise), so per-weight ratios concentrate and
    the suite maximum becomes a stable frozen-fixture statistic.
    """
    grid = w.grid
    mass = GridFunction(grid, w.values / np.sum(w.values))
    f = -hilbert_transform(mass).values / mkw.values
    if not np.any(np.abs(f) > 0):
        f = np.ones(grid.ncells)
    for _ in range(iters):
        hf = hilbert_transform(GridFunction(grid, f)).values
        f = -hilbert_transform(GridFunction(grid, w.values * hf)).values / mkw.values
        f = f / np.linalg.norm(f)
    return f


def _fs_carleson_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    """Carleson FS ratio at the weight's deterministic near-extremal f."""
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    mkw = iterated_maximal(w, spec.k)
    f = _hilbert_eigen_extremizer(w, mkw)

    def evaluate(fvals, wvals):
        ff = GridFunction(grid, fvals)
        ww = Weight(grid, wvals)
        lhs = weighted_lp_power(carleson(ff), ww, spec.p)
        rhs = weighted_lp_power(ff, iterated_maximal(ww, spec.k), spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f, w.values)
    _assert_scale_invariance(spec, evaluate, f, w.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family, "extremal_f": "hilbert-eigen"})


def _fs_vv_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    fs = gaussian_vector(grid, rng, spec.components)

    def evaluate(stack, wvals):
        comps = [GridFunction(grid, row) for row in stack]
        ww = Weight(grid, wvals)
        tf = vector_lq([carleson(f) for f in comps], spec.q)
        fq = vector_lq(comps, spec.q)
        lhs = weighted_lp_power(tf, ww, spec.p)
        rhs = weighted_lp_power(fq, iterated_maximal(ww, spec.k), spec.p)
        return lhs, rhs

    stack = np.stack([f.values for f in fs])
    lhs, rhs = evaluate(stack, w.values)
    _assert_scale_invariance(spec, evaluate, stack, w.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family, "components": spec.components})


def _sparse_family_for(spec: ExperimentSpec, grid: TorusGrid, family_idx: int):
    rng = trial_rng(spec.seed, family_idx, stream=7)
    seed_fn = gaussian_function(grid, rng)
    return sparse_decompose(seed_fn, DyadicInterval(0, 0))


def _fs_sparse_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family_idx = trial % spec.n_sparse_families
    sparse = _sparse_family_for(spec, grid, family_idx)
    wfam = spec.families[trial % len(spec.families)]
    w = make_weight(grid, wfam, rng)
    f = gaussian_function(grid, rng)
    a_young = parse_young(spec.young_a) if spec.young_a else logpow(int(math.floor(spec.p)))

    def evaluate(fvals, wvals):
        ff = GridFunction(grid, fvals)
        ww = Weight(grid, wvals)
        af = sparse_operator(ff, sparse, spec.r, dilated=True)
        lhs = weighted_lp_power(af, ww, spec.p) ** (1.0 / spec.p)
        rhs = weighted_lp_power(ff, orlicz_maximal(ww, a_young), spec.p) ** (1.0 / spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f.values, w.values)
    _assert_scale_invariance(spec, evaluate, f.values, w.values, lhs, rhs)
    return _make_record(
        spec, trial, lhs, rhs, {"family": wfam, "sparse_family": family_idx}
    )


def _mb_strong_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    b_young = parse_young(spec.young_b) if spec.young_b else power(1.5)
    f = np.abs(gaussian_function(grid, rng).values) + 1e-12

    def evaluate(fvals, _unused):
        ff = Weight(grid, fvals)
        lhs = lp_norm(orlicz_maximal(ff, b_young), spec.p)
        rhs = lp_norm(ff, spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f, None)
    l2, r2 = evaluate(2.0 * f, None)
    assert abs((l2 / r2) / (lhs / rhs) - 1.0) <= SCALE_TOL
    return _make_record(spec, trial, lhs, rhs, {"young_b": b_young.name})


def _mb_fs_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    u = make_weight(grid, family, rng)
    b_young = parse_young(spec.young_b) if spec.young_b else power(1.5)
    f = np.abs(gaussian_function(grid, rng).values) + 1e-12

    def evaluate(fvals, uvals):
        ff = Weight(grid, fvals)
        uu = Weight(grid, uvals)
        lhs = weighted_lp_power(orlicz_maximal(ff, b_young), uu, spec.p)
        rhs = weighted_lp_power(GridFunction(grid, fvals), hl_maximal(uu), spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f, u.values)
    _assert_scale_invariance(spec, evaluate, f, u.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family, "young_b": b_young.name})


def _reverse_fs_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    u = make_weight(grid, family, rng)
    w = Weight(grid, np.exp(rng.standard_normal(grid.ncells)))
    a_young = parse_young(spec.young_a) if spec.young_a else power(spec.p)
    f = np.abs(gaussian_function(grid, rng).values) + 1e-12
    h = grid.cell_width
    pm1 = spec.p - 1.0

    def evaluate(fvals, uvals):
        ff = Weight(grid, fvals)
        uu = Weight(grid, uvals)
        maw = orlicz_maximal(w, a_young)
        lhs = float(np.sum(hl_maximal(ff).values ** spec.p * uvals / maw.values**pm1) * h)
        rhs = float(np.sum(fvals**spec.p * hl_maximal(uu).values / w.values**pm1) * h)
        return lhs, rhs

    lhs, rhs = evaluate(f, u.values)
    _assert_scale_invariance(spec, evaluate, f, u.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family, "young_a": a_young.name})


def _coifman_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    a_young = parse_young(spec.young_a) if spec.young_a else logpow(1)
    ratio = coifman_rochberg_ratio(w, a_young, spec.delta)
    ratio2 = coifman_rochberg_ratio(Weight(grid, 4.0 * w.values), a_young, spec.delta)
    assert abs(ratio2 / ratio - 1.0) <= 1e-9
    return _make_record(spec, trial, ratio, 1.0, {"family": family, "young_a": a_young.name})


def two_weight_constant(
    u: Weight, v: Weight, A: YoungFunction, B: YoungFunction, p: float, r: float
) -> float:
    """Joint testing constant: sup over all wrapped intervals of
    |u^(1/p)|_{A,Q} * |v^(-r/p)|_{B,Q}^(1/r)."""
    if not 1 < r < p:
        raise ValueError("need 1 < r < p")
    if np.any(v.values <= 0):
        raise ValueError("v must be strictly positive")
    n = u.grid.ncells
    uu = u.values ** (1.0 / p)
    vv = v.values ** (-r / p)
    best = 0.0
    for length in range(1, n + 1):
        lu = windowed_luxemburg(uu, length, A)
        lv = windowed_luxemburg(vv, length, B)
        best = max(best, float(np.max(lu * lv ** (1.0 / r))))
    return best


def _two_weight_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    gamma = parse_young(spec.young_gamma) if spec.young_gamma else power(2.0)
    a_young = power_composed(gamma, spec.p)
    pr_conj = (spec.p / spec.r) / (spec.p / spec.r - 1.0)
    b_young = parse_young(spec.young_b) if spec.young_b else power(pr_conj + 0.1)
    v = orlicz_maximal(w, gamma)
    pair = two_weight_constant(w, v, a_young, b_young, spec.p, spec.r)
    f = gaussian_function(grid, rng)

    def evaluate(fvals, _unused):
        ff = GridFunction(grid, fvals)
        lhs = weighted_lp_power(carleson(ff), w, spec.p)
        rhs = weighted_lp_power(ff, v, spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f.values, None)
    l2, r2 = evaluate(2.0 * f.values, None)
    assert abs((l2 / r2) / (lhs / rhs) - 1.0) <= SCALE_TOL
    return _make_record(
        spec,
        trial,
        lhs,
        rhs,
        {
            "family": family,
            "pair_constant": pair,
            "young_a": a_young.name,
            "young_b": b_young.name,
            "young_gamma": gamma.name,
        },
    )


def _duality_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    """Numerical transfer chain: the operator norm bound inherited from the
    weighted inequality through the dual witness weight."""
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    f = gaussian_function(grid, rng)
    h = grid.cell_width
    qq = 2.0 * spec.p
    dual_exp = (qq / spec.p) / (qq / spec.p - 1.0)
    cf = carleson(f)
    lhs = lp_norm(cf, qq)
    wstar_raw = cf.values ** (qq - spec.p)
    scale = (np.sum(wstar_raw**dual_exp) * h) ** (1.0 / dual_exp)
    if scale == 0:
        return _make_record(spec, trial, 0.0, 0.0, {"q": qq})
    wstar = Weight(grid, wstar_raw / scale)
    mkw = iterated_maximal(wstar, spec.k)
    fs_ratio = weighted_lp_power(cf, wstar, spec.p) / weighted_lp_power(f, mkw, spec.p)
    mk_ratio = (np.sum(mkw.values**dual_exp) * h) ** (1.0 / dual_exp)
    rhs = (fs_ratio * mk_ratio) ** (1.0 / spec.p) * lp_norm(f, qq)
    return _make_record(
        spec, trial, lhs, rhs, {"q": qq, "fs_ratio": fs_ratio, "mk_ratio": mk_ratio}
    )


def _holder_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    from .young import holder_defect

    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    choices = (power(2.0), power(3.0), power(1.5))
    b_young = parse_young(spec.young_b) if spec.young_b else choices[trial % len(choices)]
    f = GridFunction(grid, np.abs(rng.standard_normal(grid.ncells)) + 0.05)
    g = GridFunction(grid, np.abs(rng.standard_normal(grid.ncells)) + 0.05)
    length = int(rng.integers(2, grid.ncells + 1))
    start = int(rng.integers(grid.ncells))
    interval = CellInterval(start, length)
    defect = holder_defect(f, g, interval, b_young)
    return _make_record(spec, trial, defect, 1.0, {"young_b": b_young.name, "window": length})


def oscillation_bound_check(
    f,
    q_interval: DyadicInterval,
    profile: OperatorProfile,
    r: float,
    q: float | None = None,
    lam: float = 0.125,
) -> float:
    """Empirical constant in the local-oscillation bound for a modulated operator.

    Numerator: the lam-oscillation of Tf (or of the l^q aggregate for vector
    input) on the interval.  Denominator: psi(r) times the r-average of |f|
    on the doubled interval plus the geometrically damped ladder of plain
    averages on successive dilates, truncated at the full torus.
    """
    if not 1 < r <= profile.r0:
        raise ValueError("r must lie in (1, r0]")
    single = isinstance(f, GridFunction)
    comps = [f] if single else list(f)
    grid = comps[0].grid
    if all(not np.any(c.values) for c in comps):
        return 0.0
    qq = q or 2.0
    if profile.name == "hilbert":
        images = [np.abs(hilbert_transform(c).values) for c in comps]
    elif profile.name == "carleson":
        images = [carleson(c).values for c in comps]
    else:
        raise ValueError(f"no operator dispatch for profile {profile.name!r}")
    tf = GridFunction(grid, _lq_aggregate(images, qq))
    fq = GridFunction(grid, _lq_aggregate([np.abs(c.values) for c in comps], qq))

    ci = q_interval.cell_interval(grid)
    omega, _ = local_mean_oscillation(tf, ci, lam)
    if omega == 0.0:
        return 0.0
    qbar = dilate(ci, 2.0, grid)
    powered = GridFunction(grid, fq.values**r)
    main = profile.psi(r) * interval_average(powered, qbar) ** (1.0 / r)
    ladder = 0.0
    m = 0
    while True:
        block = dilate(ci, 2.0**m, grid)
        ladder += 2.0 ** (-m * profile.delta) * interval_average(fq, block)
        if block.length == grid.ncells:
            break
        m += 1
    return omega / (main + ladder)


def _lq_aggregate(arrays, q: float) -> np.ndarray:
    stack = np.stack(arrays)
    if q == np.inf:
        return stack.max(axis=0)
    return (stack**q).sum(axis=0) ** (1.0 / q)


_PROFILE_CACHE: dict = {}


def measured_profile(operator: str, levels: int, seed: int = 0) -> OperatorProfile:
    """Weak-type growth table psi(r) measured on a fixed seeded corpus."""
    key = (operator, levels, seed)
    if key not in _PROFILE_CACHE:
        grid = TorusGrid(levels)
        corpus = [
            gaussian_function(grid, trial_rng(seed, i, stream=13)) for i in range(12)
        ]
        if operator == "hilbert":
            apply_op = lambda f: _abs_weight(hilbert_transform(f))
        elif operator == "carleson":
            apply_op = carleson
        else:
            raise ValueError(f"no profile support for operator {operator!r}")
        rs = (1.125, 1.25, 1.5, 1.75, 2.0)
        _PROFILE_CACHE[key] = measure_profile(operator, apply_op, corpus, rs)
    return _PROFILE_CACHE[key]


def _osc_bound_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    profile = measured_profile(spec.operator, spec.levels, spec.seed)
    level = int(rng.integers(1, grid.level_count - 1))
    index = int(rng.integers(1 << level))
    q_interval = DyadicInterval(level, index)
    vector = spec.components > 1
    if vector:
        f = gaussian_vector(grid, rng, spec.components)
    else:
        f = gaussian_function(grid, rng)
    r = min(spec.r, profile.r0)
    constant = oscillation_bound_check(f, q_interval, profile, r, q=spec.q, lam=spec.lam)
    return _make_record(
        spec,
        trial,
        constant,
        1.0,
        {"interval_level": level, "interval_index": index, "vector": vector},
    )


def _fs_m_trial(spec: ExperimentSpec, trial: int) -> RatioRecord:
    """FS for the maximal operator itself: M|f| against M w."""
    grid = spec.grid()
    rng = trial_rng(spec.seed, trial)
    family = spec.families[trial % len(spec.families)]
    w = make_weight(grid, family, rng)
    f = gaussian_function(grid, rng)

    def evaluate(fvals, wvals):
        ff = GridFunction(grid, fvals)
        ww = Weight(grid, wvals)
        mf = hl_maximal(_abs_weight(ff))
        lhs = weighted_lp_power(mf, ww, spec.p)
        rhs = weighted_lp_power(ff, hl_maximal(ww), spec.p)
        return lhs, rhs

    lhs, rhs = evaluate(f.values, w.values)
    _assert_scale_invariance(spec, evaluate, f.values, w.values, lhs, rhs)
    return _make_record(spec, trial, lhs, rhs, {"family": family})


_TRIAL_DISPATCH = {
    "FS_M": _fs_m_trial,
    "FS_MS": _fs_trial,
    "FS_MK": _fs_trial,
    "FS_MA": _fs_trial,
    "FS_CARLESON": _fs_carleson_trial,
    "FS_WALSH": _fs_trial,
    "FS_LACUNARY": _fs_trial,
    "FS_BV": _fs_trial,
    "FS_POLY": _fs_trial,
    "FS_VV": _fs_vv_trial,
    "FS_SPARSE": _fs_sparse_trial,
    "MB_STRONG": _mb_strong_trial,
    "MB_FS": _mb_fs_trial,
    "REVERSE_FS": _reverse_fs_trial,
    "COIFMAN": _coifman_trial,
    "TWO_WEIGHT": _two_weight_trial,
    "DUALITY": _duality_trial,
    "HOLDER": _holder_trial,
    "OSC_BOUND": _osc_bound_trial,
}


def run_experiment(spec: ExperimentSpec) -> list[RatioRecord]:
    """One RatioRecord per trial; deterministic given (spec, seed)."""
    if spec.kind == "SHARPNESS":
        return sharpness_records(spec)
    return _run_trials(spec, _TRIAL_DISPATCH[spec.kind])


def _run_trials(spec: ExperimentSpec, fn) -> list[RatioRecord]:
    indices = range(spec.trials)
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(lambda i: fn(spec, i), indices))
    else:
        records = [fn(spec, i) for i in indices]
    return sorted(records, key=lambda rec: rec.trial)


# ---------------------------------------------------------------------------
# Extremal search


def _ratio_evaluator(spec: ExperimentSpec):
    """(fvals, wvals) -> ratio for the search-supported kinds."""
    grid = spec.grid()
    if spec.kind == "FS_M":

        def eval_fm(fvals, wvals):
            ff = Weight(grid, np.abs(fvals))
            ww = Weight(grid, wvals)
            lhs = weighted_lp_power(hl_maximal(ff), ww, spec.p)
            rhs = weighted_lp_power(ff, hl_maximal(ww), spec.p)
            return lhs / rhs if rhs > 0 else 0.0

        return eval_fm
    if spec.kind == "MB_STRONG":
        b_young = parse_young(spec.young_b) if spec.young_b else power(1.5)

        def eval_mb(fvals, wvals):
            ff = Weight(grid, np.abs(fvals) + 1e-300)
            lhs = lp_norm(orlicz_maximal(ff, b_young), spec.p)
            rhs = lp_norm(ff, spec.p)
            return lhs / rhs if rhs > 0 else 0.0

        return eval_mb
    if spec.kind in ("FS_MK", "FS_CARLESON"):
        apply_op = operator_apply(spec, grid)

        def eval_mk(fvals, wvals):
            ff = GridFunction(grid, fvals)
            ww = Weight(grid, wvals)
            lhs = weighted_lp_power(apply_op(ff), ww, spec.p)
            rhs = weighted_lp_power(ff, iterated_maximal(ww, spec.k), spec.p)
            return lhs / rhs if rhs > 0 else 0.0

        return eval_mk
    raise ValueError(f"search is not wired for kind {spec.kind}")


def _climb(ratio_fn, f0, w0, budget, rng, perturb_w=True, sigma=0.5):
    """Accept-if-improved hill climb by multiplicative block perturbations."""
    n = f0.size
    cur_f, cur_w = f0.copy(), w0.copy()
    best = ratio_fn(cur_f, cur_w)
    trace = [best]
    for _ in range(budget - 1):
        start = int(rng.integers(n))
        length = int(rng.integers(1, max(2, n // 2)))
        factor = float(np.exp(rng.normal(0.0, sigma)))
        target_w = perturb_w and bool(rng.integers(2))
        trial_f, trial_w = cur_f, cur_w
        idx = (start + np.arange(length)) % n
        if target_w:
            trial_w = cur_w.copy()
            trial_w[idx] *= factor
        else:
            trial_f = cur_f.copy()
            trial_f[idx] *= factor
        value = ratio_fn(trial_f, trial_w)
        if value > best:
            best, cur_f, cur_w = value, trial_f, trial_w
        trace.append(best)
    return best, cur_f, cur_w, trace


def search_extremal(spec: ExperimentSpec, budget: int | None = None) -> SearchResult:
    """Randomized hill climb maximizing the kind's ratio over (f, w)."""
    budget = budget or spec.budget
    grid = spec.grid()
    rng = trial_rng(spec.seed, 0, stream=21)
    f0 = gaussian_function(grid, rng).values
    w0 = make_weight(grid, spec.families[0], rng).values
    ratio_fn = _ratio_evaluator(spec)
    best, bf, bw, trace = _climb(ratio_fn, f0, w0, budget, rng)
    record = _make_record(spec, 0, best, 1.0, {"budget": budget})
    return SearchResult(best=record, iterations=budget, trace=trace, best_f=bf, best_w=bw)


# ---------------------------------------------------------------------------
# Sharpness probe


@dataclass
class SharpnessTrend:
    eps: list
    ratios_low: list
    ratios_high: list
    k_low: int
    k_high: int
    growth_low: float
    growth_high: float
    spread_high: float


def sharpness_probe(
    p: float,
    k_low: int,
    k_high: int,
    eps_seq,
    levels: int = 9,
    budget: int = 60,
    seed: int = 0,
    weight_for=None,
) -> SharpnessTrend:
    """Growth of the best Hilbert-transform ratio against M^k for shrinking bumps.

    For each bump width the probe fixes w = (1/eps) * chi_[0, eps), seeds the
    search with the transform of the bump divided by the controlling weight
    (the Cauchy-Schwarz near-extremizer), and hill-climbs from there.
    """
    if k_low > k_high:
        raise ValueError("need k_low <= k_high")
    eps_seq = list(eps_seq)
    if any(b >= a for a, b in zip(eps_seq, eps_seq[1:])):
        raise ValueError("eps sequence must be strictly decreasing")
    grid = TorusGrid(levels)
    ratios = {k_low: [], k_high: []}
    for j, eps in enumerate(eps_seq):
        w = weight_for(eps) if weight_for is not None else bump_weight(grid, eps, 0)
        for k in sorted(set((k_low, k_high))):
            mkw = iterated_maximal(w, k)

            def ratio_fn(fvals, _ignored, _w=w, _mkw=mkw):
                ff = GridFunction(grid, fvals)
                hf = hilbert_transform(ff)
                lhs = weighted_lp_power(hf, _w, p)
                rhs = weighted_lp_power(ff, _mkw, p)
                return lhs / rhs if rhs > 0 else 0.0

            delta = GridFunction(grid, w.values / np.sum(w.values))
            f0 = -hilbert_transform(delta).values / mkw.values
            if not np.any(np.abs(f0) > 1e-300):
                f0 = gaussian_function(grid, trial_rng(seed, k, stream=37)).values
            rng = trial_rng(seed, k, stream=31)
            best, _, _, _ = _climb(ratio_fn, f0, w.values, budget, rng, perturb_w=False)
            ratios[k].append(best)
    low, high = ratios[k_low], ratios[k_high]
    return SharpnessTrend(
        eps=eps_seq,
        ratios_low=low,
        ratios_high=high,
        k_low=k_low,
        k_high=k_high,
        growth_low=low[-1] / low[0],
        growth_high=high[-1] / high[0],
        spread_high=max(high) / min(high),
    )


def sharpness_records(spec: ExperimentSpec) -> list[RatioRecord]:
    eps_seq = spec.eps_list or tuple(2.0 ** (-j) for j in range(3, 10))
    k_low = int(math.floor(spec.p))
    trend = sharpness_probe(
        spec.p, k_low, k_low + 1, eps_seq, levels=spec.levels, budget=spec.budget, seed=spec.seed
    )
    records = []
    for i, eps in enumerate(trend.eps):
        extra = {
            "eps": eps,
            "k_low": trend.k_low,
            "k_high": trend.k_high,
            "ratio_klow": trend.ratios_low[i],
            "ratio_khigh": trend.ratios_high[i],
            "growth_low": trend.growth_low,
            "growth_high": trend.growth_high,
            "spread_high": trend.spread_high,
            "budget": spec.budget,
        }
        records.append(
            _make_record(spec, i, trend.ratios_low[i], trend.ratios_high[i], extra)
        )
    return records


# ---------------------------------------------------------------------------
# JSONL output


def write_jsonl(records, path) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_jsonl(path) -> list[RatioRecord]:
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                out.append(RatioRecord.from_json(line))
    return out
