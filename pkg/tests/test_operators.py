import numpy as np
import pytest

from mmfs.grid import GridFunction, TorusGrid
from mmfs.operators import (
    MultiplierBV,
    bv_maximal_multiplier,
    carleson,
    character_matrix,
    fourier_coefficients,
    hilbert_transform,
    integer_coeff_grid,
    lacunary_carleson,
    measure_profile,
    modulated_sup,
    polynomial_carleson,
    random_bv_family,
    vector_lq,
    walsh_carleson,
    walsh_coefficients,
    walsh_matrix,
    walsh_partial_sum,
    weak_lr_norm,
)


def _grid(levels=8):
    return TorusGrid(levels)


def _x(grid):
    return np.arange(grid.ncells) / grid.ncells


def carleson_oracle(f):
    """Double loop: every partial sum rebuilt from scratch in shell order."""
    n = f.grid.ncells
    coeffs = fourier_coefficients(f)
    chars = character_matrix(n)
    out = None
    for m in range(n // 2 + 1):
        partial = np.full(n, coeffs[0], dtype=np.complex128)
        for k in range(1, m + 1):
            shell = coeffs[k] * chars[k]
            if k < n - k:
                shell = shell + coeffs[n - k] * np.conj(chars[k])
            partial = partial + shell
        mag = np.abs(partial)
        out = mag if out is None else np.maximum(out, mag)
    return out


def walsh_oracle(f):
    n = f.grid.ncells
    coeffs = walsh_coefficients(f)
    chars = walsh_matrix(f.grid.level_count)
    out = None
    for terms in range(1, n + 1):
        partial = np.zeros(n)
        for m in range(terms):
            partial = partial + coeffs[m] * chars[m]
        mag = np.abs(partial)
        out = mag if out is None else np.maximum(out, mag)
    return out


def test_hilbert_trig_identities():
    g = _grid()
    x = _x(g)
    for k in (1, 3, 7):
        cos_k = GridFunction(g, np.cos(2 * np.pi * k * x))
        sin_k = GridFunction(g, np.sin(2 * np.pi * k * x))
        assert np.max(np.abs(hilbert_transform(cos_k).values - np.sin(2 * np.pi * k * x))) < 1e-10
        assert np.max(np.abs(hilbert_transform(sin_k).values + np.cos(2 * np.pi * k * x))) < 1e-10
    const = GridFunction(g, np.full(g.ncells, 5.0))
    assert np.max(np.abs(hilbert_transform(const).values)) < 1e-12


def test_hilbert_real_output_and_parseval():
    g = _grid()
    rng = np.random.default_rng(0)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    hf = hilbert_transform(f)
    assert hf.kind == "real"
    spec = np.fft.fft(f.values)
    back = np.fft.ifft(spec)
    assert np.max(np.abs(back - f.values)) < 1e-12


def test_carleson_trivial_examples():
    g = _grid()
    x = _x(g)
    mode = GridFunction(g, np.exp(2j * np.pi * 3 * x), "complex")
    assert np.max(np.abs(carleson(mode).values - 1.0)) < 1e-12

    cos3 = GridFunction(g, np.cos(2 * np.pi * 3 * x))
    assert np.max(np.abs(carleson(cos3).values - np.abs(np.cos(2 * np.pi * 3 * x)))) < 1e-12


def test_carleson_matches_oracle_exactly():
    rng = np.random.default_rng(1)
    g = TorusGrid(6)
    x = _x(g)
    two_modes = GridFunction(g, np.cos(2 * np.pi * x) + np.cos(2 * np.pi * 5 * x))
    assert np.array_equal(carleson(two_modes).values, carleson_oracle(two_modes))
    for _ in range(3):
        f = GridFunction(g, rng.standard_normal(g.ncells))
        assert np.array_equal(carleson(f).values, carleson_oracle(f))


def test_carleson_lower_bound_and_sublinearity():
    g = TorusGrid(6)
    rng = np.random.default_rng(2)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    h = GridFunction(g, rng.standard_normal(g.ncells))
    cf, ch = carleson(f).values, carleson(h).values
    mean = abs(np.mean(f.values))
    assert np.all(cf >= mean - 1e-12)
    both = carleson(GridFunction(g, f.values + h.values)).values
    assert np.all(both <= cf + ch + 1e-12)
    scaled = carleson(GridFunction(g, 2.0 * f.values)).values
    assert np.allclose(scaled, 2.0 * cf, rtol=1e-13)


def test_walsh_character_and_constant():
    g = TorusGrid(3)
    chars = walsh_matrix(3)
    w5 = GridFunction(g, chars[5])
    assert np.max(np.abs(walsh_carleson(w5).values - 1.0)) < 1e-12
    const = GridFunction(g, np.full(8, -1.5))
    assert np.max(np.abs(walsh_carleson(const).values - 1.5)) < 1e-12


def test_walsh_martingale_identity():
    g = _grid()
    rng = np.random.default_rng(3)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    for k in (1, 2, 4):
        terms = 1 << k
        block = f.values.reshape(terms, -1).mean(axis=1)
        expected = np.repeat(block, g.ncells // terms)
        got = walsh_partial_sum(f, terms).values
        assert np.max(np.abs(got - expected)) < 1e-12


def test_walsh_matches_oracle_exactly():
    g = TorusGrid(5)
    rng = np.random.default_rng(4)
    for _ in range(3):
        f = GridFunction(g, rng.standard_normal(g.ncells))
        assert np.array_equal(walsh_carleson(f).values, walsh_oracle(f))


def test_walsh_parseval_round_trip():
    g = _grid()
    rng = np.random.default_rng(5)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    full = walsh_partial_sum(f, g.ncells).values
    assert np.max(np.abs(full - f.values)) < 1e-12


def test_modulated_sup_examples():
    g = _grid()
    rng = np.random.default_rng(6)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    single = modulated_sup(f, [0]).values
    assert np.allclose(single, np.abs(hilbert_transform(f).values), rtol=1e-12)

    x = _x(g)
    mode = GridFunction(g, np.exp(2j * np.pi * 4 * x), "complex")
    out = modulated_sup(mode, [-4, 0]).values
    assert np.max(np.abs(out - 1.0)) < 1e-10
    with pytest.raises(ValueError):
        modulated_sup(f, [])


def test_lacunary_examples():
    g = _grid()
    rng = np.random.default_rng(7)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    lams = [1, 2, 4, 8, 16, 32, 64]
    fast = lacunary_carleson(f, lams, 2.0).values
    direct = np.zeros(g.ncells)
    for lam in lams:
        direct = np.maximum(direct, modulated_sup(f, [lam]).values)
    assert np.allclose(fast, direct, rtol=1e-13)

    everything = modulated_sup(f, range(-g.ncells // 2, g.ncells // 2 + 1)).values
    assert np.all(fast <= everything + 1e-12)

    with pytest.raises(ValueError):
        lacunary_carleson(f, [1, 2, 3], 2.0)
    with pytest.raises(ValueError):
        lacunary_carleson(f, [], 2.0)


def test_bv_multiplier_identity_family():
    g = _grid()
    rng = np.random.default_rng(8)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    identity = MultiplierBV((), (1.0,))
    assert identity.bv_norm == 1.0
    out = bv_maximal_multiplier(f, [identity]).values
    assert np.allclose(out, np.abs(f.values), rtol=1e-12)


def test_bv_multiplier_half_plane_oracle():
    g = _grid()
    rng = np.random.default_rng(9)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    half = MultiplierBV((0,), (0.0, 0.5))
    assert half.bv_norm == pytest.approx(1.0)
    out = bv_maximal_multiplier(f, [half]).values
    assert np.allclose(out, np.abs(half.apply(f).values), rtol=1e-13)

    unnormalized = MultiplierBV((0,), (0.0, 2.0))
    with pytest.raises(ValueError):
        bv_maximal_multiplier(f, [unnormalized])


def test_bv_random_family_normalized():
    family = random_bv_family(6, seed=3)
    assert len(family) == 6
    for mult in family:
        assert mult.bv_norm == pytest.approx(1.0, rel=1e-9)


def test_polynomial_carleson_consistency():
    g = TorusGrid(6)
    rng = np.random.default_rng(10)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    freqs = [-2, -1, 0, 1, 2]
    lattice = [(float(a),) for a in freqs]
    poly = polynomial_carleson(f, 1, lattice).values
    modsup = modulated_sup(f, freqs).values
    assert np.allclose(poly, modsup, rtol=1e-12)
    assert np.all(poly >= np.abs(hilbert_transform(f).values) - 1e-12)


def test_polynomial_carleson_direct_loop():
    g = TorusGrid(6)
    rng = np.random.default_rng(11)
    f = GridFunction(g, rng.standard_normal(g.ncells))
    lattice = integer_coeff_grid(2, 2)
    fast = polynomial_carleson(f, 2, lattice).values
    x = _x(g)
    direct = np.zeros(g.ncells)
    for c1, c2 in lattice:
        phase = np.exp(2j * np.pi * (c1 * x + c2 * x**2))
        mod = GridFunction(g, phase * f.values, "complex")
        direct = np.maximum(direct, np.abs(hilbert_transform(mod).values))
    assert np.allclose(fast, direct, rtol=1e-12)
    with pytest.raises(ValueError):
        polynomial_carleson(f, 2, [(1.0, 1.0)])  # zero polynomial missing


def test_vector_lq():
    g = TorusGrid(4)
    rng = np.random.default_rng(12)
    f = GridFunction(g, rng.standard_normal(16))
    assert np.allclose(vector_lq([f], 2.0).values, np.abs(f.values))
    two = vector_lq([f, f], 2.0).values
    assert np.allclose(two, np.sqrt(2.0) * np.abs(f.values), rtol=1e-14)
    inf = vector_lq([f, GridFunction(g, -2.0 * f.values)], np.inf).values
    assert np.allclose(inf, 2.0 * np.abs(f.values))
    with pytest.raises(ValueError):
        vector_lq([], 2.0)
    with pytest.raises(ValueError):
        vector_lq([f, GridFunction(TorusGrid(5), np.zeros(32))], 2.0)


def test_weak_norm_and_profile():
    g = TorusGrid(6)
    rng = np.random.default_rng(13)
    f = GridFunction(g, rng.standard_normal(64))
    weak = weak_lr_norm(f, 2.0)
    strong = float(np.sqrt(np.mean(f.values**2)))
    assert weak <= strong + 1e-12

    corpus = [GridFunction(g, rng.standard_normal(64)) for _ in range(4)]
    profile = measure_profile(
        "hilbert",
        lambda h: GridFunction(g, np.abs(hilbert_transform(h).values)),
        corpus,
        rs=(1.25, 1.5, 2.0),
    )
    table = [profile.psi_table[r] for r in sorted(profile.psi_table)]
    assert all(a >= b - 1e-15 for a, b in zip(table, table[1:]))
    assert all(v > 0 for v in table)
    assert profile.psi(1.6) <= profile.psi(1.4) + 1e-15


def test_modulated_sup_comparable_to_carleson():
    # measured comparability with the partial-sum form: over a seeded corpus
    # the full-frequency modulated supremum stays below a fixed multiple of
    # M f + C f + |f| (pilot-frozen constant)
    from mmfs.grid import Weight
    from mmfs.maximal import hl_maximal

    g = TorusGrid(6)
    n = g.ncells
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng([91, seed])
        f = GridFunction(g, rng.standard_normal(n))
        ms = modulated_sup(f, range(-n // 2, n // 2 + 1)).values
        cf = carleson(f).values
        mf = hl_maximal(Weight(g, np.abs(f.values))).values
        worst = max(worst, float(np.max(ms / (mf + cf + np.abs(f.values)))))
    assert np.isfinite(worst)
    assert worst <= 1.5  # pilot value 1.368


def test_bv_multiplier_pointwise_bound():
    # normalized BV multipliers sit below |f| + Cf pointwise on the corpus
    family = random_bv_family(8, seed=5)
    g = TorusGrid(6)
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng([92, seed])
        f = GridFunction(g, rng.standard_normal(g.ncells))
        out = bv_maximal_multiplier(f, family).values
        cf = carleson(f).values
        worst = max(worst, float(np.max(out / (np.abs(f.values) + cf))))
    assert worst <= 1.0  # pilot value 0.497
