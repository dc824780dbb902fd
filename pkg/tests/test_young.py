import numpy as np
import pytest
from scipy.optimize import brentq

from mmfs.errors import UnsupportedYoungFunctionError
from mmfs.grid import CellInterval, GridFunction, TorusGrid
from mmfs.young import (
    CONVERGES,
    DIVERGES,
    bp_verdict,
    complementary,
    condition_1_10_check,
    holder_defect,
    logpow,
    luxemburg_norm,
    parse_young,
    power,
    power_composed,
)

G8 = TorusGrid(3)
FULL = CellInterval(0, 8)


def test_young_construction_and_parsing():
    assert parse_young("power:2.5").params["a"] == 2.5
    assert parse_young("logpow:2").params["k"] == 2
    assert parse_young("logpow:0").tag == "power"
    with pytest.raises(ValueError):
        parse_young("power")
    with pytest.raises(ValueError):
        parse_young("exp:1")
    with pytest.raises(ValueError):
        power(0.5)


def test_luxemburg_identity_is_mean():
    rng = np.random.default_rng(0)
    f = GridFunction(G8, rng.random(8) + 0.2)
    norm = luxemburg_norm(power(1.0), f, FULL)
    assert norm == pytest.approx(np.mean(np.abs(f.values)), rel=1e-12)


def test_luxemburg_square_is_rms():
    rng = np.random.default_rng(1)
    f = GridFunction(G8, rng.standard_normal(8))
    norm = luxemburg_norm(power(2.0), f, FULL)
    assert norm == pytest.approx(np.sqrt(np.mean(f.values**2)), rel=1e-12)


def test_luxemburg_logpow_scalar_oracle():
    # for f == 1 the norm solves A(1 / lambda) = 1
    t_star = brentq(lambda t: t * np.log1p(t) - 1.0, 0.1, 5.0, xtol=1e-15)
    f = GridFunction(G8, np.ones(8))
    norm = luxemburg_norm(logpow(1), f, FULL)
    assert norm == pytest.approx(1.0 / t_star, rel=1e-12)


def test_luxemburg_residual_and_homogeneity():
    rng = np.random.default_rng(2)
    for A in (power(1.0), power(2.0), power(3.1), logpow(1), logpow(2)):
        for trial in range(10):
            vals = np.abs(rng.standard_normal(8)) + 1e-3
            f = GridFunction(G8, vals)
            lam = luxemburg_norm(A, f, FULL)
            residual = abs(np.mean(A(vals / lam)) - 1.0)
            assert residual <= 1e-10
            scaled = luxemburg_norm(A, GridFunction(G8, 3.7 * vals), FULL)
            assert scaled == pytest.approx(3.7 * lam, rel=1e-10)


def test_luxemburg_zero_function():
    f = GridFunction(G8, np.zeros(8))
    assert luxemburg_norm(power(2.0), f, FULL) == 0.0


def test_complementary_power_pair():
    for p in (1.5, 2.0, 3.0, 4.0):
        B = power(p)
        Bbar = complementary(B)
        ts = np.logspace(-3, 3, 60)
        s = (ts / p) ** (1.0 / (p - 1.0))
        exact = s * ts - s**p
        assert np.max(np.abs(Bbar(ts) - exact) / exact) < 1e-8


def test_complementary_square_normalization():
    # t^2/2 is self-conjugate; t^2 pairs with t^2/4
    B = power(2.0)
    Bbar = complementary(B)
    ts = np.logspace(-2, 2, 30)
    assert np.max(np.abs(Bbar(ts) - ts**2 / 4.0) / (ts**2 / 4.0)) < 1e-8


@pytest.mark.parametrize("B", [power(2.0), power(3.0), logpow(1), logpow(2)])
def test_conjugacy_sandwich(B):
    Bbar = complementary(B)
    ts = np.logspace(-3, 3, 50)
    prod = np.atleast_1d(B.inverse(ts)) * np.atleast_1d(Bbar.inverse(ts))
    assert np.all(prod >= ts * (1 - 1e-6))
    assert np.all(prod <= 2 * ts * (1 + 1e-6))


def test_complementary_rejects_linear():
    with pytest.raises(UnsupportedYoungFunctionError):
        complementary(power(1.0))


def test_holder_defect_examples():
    ones = GridFunction(G8, np.ones(8))
    assert holder_defect(ones, ones, FULL, power(2.0)) <= 1 + 1e-6

    rng = np.random.default_rng(3)
    for _ in range(20):
        f = GridFunction(G8, rng.random(8) + 0.05)
        g = GridFunction(G8, rng.random(8) + 0.05)
        assert holder_defect(f, g, FULL, power(3.0)) <= 1 + 1e-6

    # Cauchy-Schwarz equality case sits at the sharp constant
    f = GridFunction(G8, rng.random(8) + 0.5)
    defect = holder_defect(f, f, FULL, power(2.0))
    assert defect == pytest.approx(1.0, rel=1e-8)


def test_holder_defect_zero_denominator():
    zero = GridFunction(G8, np.zeros(8))
    ones = GridFunction(G8, np.ones(8))
    assert holder_defect(zero, ones, FULL, power(2.0)) == 0.0


def test_condition_1_10_calibration():
    assert condition_1_10_check(power(1.0), 2.0).verdict == DIVERGES
    assert condition_1_10_check(power(2.0), 2.0).verdict == CONVERGES
    assert condition_1_10_check(logpow(1), 2.0).verdict == DIVERGES
    assert condition_1_10_check(logpow(2), 2.0).verdict == CONVERGES


def test_condition_1_10_other_exponents():
    # p' - 1 = 2 at p = 1.5: t log^k needs 2k > 1, so k = 1 converges
    assert condition_1_10_check(logpow(1), 1.5).verdict == CONVERGES
    # p' - 1 = 1/2 at p = 3: k = 2 gives exponent 1, divergent
    assert condition_1_10_check(logpow(2), 3.0).verdict == DIVERGES
    assert condition_1_10_check(logpow(3), 3.0).verdict == CONVERGES
    with pytest.raises(ValueError):
        condition_1_10_check(power(2.0), 1.0)


def test_condition_1_10_composed():
    gamma = logpow(1)
    A = power_composed(gamma, 2.0)  # t^2 log(1 + t^2)
    assert condition_1_10_check(A, 2.0).verdict == CONVERGES


def test_bp_verdicts():
    assert bp_verdict(power(1.5), 2.0).verdict == CONVERGES
    assert bp_verdict(power(2.0), 2.0).verdict == DIVERGES
    assert bp_verdict(logpow(3), 2.0).verdict == CONVERGES


def test_doubling_constant_finite():
    for A in (power(2.0), logpow(1), logpow(2)):
        assert np.isfinite(A.doubling_constant)
        assert A.doubling_constant >= 2.0 - 1e-9


def test_power_composed_matches_direct():
    gamma = power(2.0)
    A = power_composed(gamma, 2.0)
    assert A.tag == "power" and A.params["a"] == 4.0
    B = power_composed(logpow(1), 2.0)
    ts = np.logspace(-2, 2, 20)
    assert np.allclose(B(ts), ts**2 * np.log1p(ts**2), rtol=1e-12)
