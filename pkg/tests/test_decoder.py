import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfgkp.algebra import HALF_SQRT_PI, SQRT_PI, DomainError, PhasePoint
from tfgkp.decoder import (
    Pauli,
    decode,
    failure_line,
    failure_map,
    nearest_multiple,
    p_fail_analytic,
    p_fail_monte_carlo,
)
from tfgkp.noise import NoiseModel

from .oracles import erf_series, p_fail_quadrature, p_fail_series

coords = st.floats(min_value=-40, max_value=40, allow_nan=False)
points = st.builds(PhasePoint, coords, coords)
small_ints = st.integers(min_value=-6, max_value=6)


def test_erf_oracle_against_quadrature():
    # the series oracle itself, checked against brute-force quadrature of the Gaussian
    from scipy import integrate

    for x in np.linspace(0.05, 4.0, 20):
        quad, _ = integrate.quad(lambda t: math.exp(-t * t), 0, x, epsabs=1e-14, epsrel=1e-14)
        assert erf_series(x) == pytest.approx(2 / math.sqrt(math.pi) * quad, abs=1e-14)
        assert math.erf(x) == pytest.approx(erf_series(x), abs=1e-15)


@pytest.mark.parametrize(
    "delta, residual, cls, ok",
    [
        ((0.30, -0.20), (0.30, -0.20), Pauli.I, True),
        ((1.90, 0.00), (1.90 - SQRT_PI, 0.0), Pauli.Z, False),
        ((0.00, 3.60), (0.0, 3.60 - 2 * SQRT_PI), Pauli.I, False),
        ((0.0, 1.9), (0.0, 1.9 - SQRT_PI), Pauli.X, False),
        ((-1.9, 1.9), (SQRT_PI - 1.9, 1.9 - SQRT_PI), Pauli.Y, False),
    ],
)
def test_decode_examples(delta, residual, cls, ok):
    out = decode(PhasePoint(*delta))
    assert out.residual.tau == pytest.approx(residual[0], abs=1e-15)
    assert out.residual.omega == pytest.approx(residual[1], abs=1e-15)
    assert out.logical_class is cls
    assert out.paper_success is ok


def test_decode_frozen_values():
    assert decode(PhasePoint(1.90, 0)).residual.tau == pytest.approx(0.1275, abs=1e-4)
    assert decode(PhasePoint(0, 3.60)).residual.omega == pytest.approx(0.0551, abs=1e-4)


def test_boundary_tie_goes_up():
    out = decode(PhasePoint(HALF_SQRT_PI, -HALF_SQRT_PI))
    assert out.residual == PhasePoint(-HALF_SQRT_PI, -HALF_SQRT_PI)
    assert out.logical_class is Pauli.Z
    assert out.paper_success is False
    k, r = nearest_multiple(np.array([HALF_SQRT_PI, -HALF_SQRT_PI]))
    assert k.tolist() == [1, 0]
    assert r.tolist() == [-HALF_SQRT_PI, -HALF_SQRT_PI]


@given(points)
def test_residual_in_half_open_cell(p):
    r = decode(p).residual
    for v in r.as_tuple():
        assert -HALF_SQRT_PI <= v < HALF_SQRT_PI


@given(points)
def test_decode_idempotent(p):
    first = decode(p)
    again = decode(first.residual)
    assert again.logical_class is Pauli.I
    assert again.residual == first.residual


@given(st.builds(PhasePoint, st.floats(-0.8, 0.8), st.floats(-0.8, 0.8)), small_ints, small_ints)
def test_shift_covariance(p, a, b):
    v = PhasePoint(a * SQRT_PI, b * SQRT_PI)
    base, shifted = decode(p), decode(p + v)
    assert shifted.residual.tau == pytest.approx(base.residual.tau, abs=1e-13)
    assert shifted.residual.omega == pytest.approx(base.residual.omega, abs=1e-13)
    assert shifted.logical_class is base.logical_class * Pauli.from_parities(a % 2 == 1, b % 2 == 1)


def test_pauli_group():
    assert Pauli.X * Pauli.Z is Pauli.Y
    assert Pauli.Y * Pauli.Y is Pauli.I
    for p in Pauli:
        assert p * Pauli.I is p


def test_analytic_examples():
    assert p_fail_analytic(NoiseModel(0, 0)) == 0
    assert p_fail_analytic(NoiseModel(0.2 * SQRT_PI, 0.2 * SQRT_PI)) == pytest.approx(0.0248, abs=2e-4)
    assert p_fail_analytic(NoiseModel(0.2 * SQRT_PI, 0.1 * SQRT_PI)) == pytest.approx(0.0125, abs=2e-4)


@pytest.mark.parametrize(
    "st_, so",
    [(0.2, 0.2), (0.2, 0.1), (0.05, 0.4), (0.3, 0.3), (0.5, 0.02), (0.12, 0.0), (1.0, 1.0), (0.08, 0.08)],
)
def test_analytic_against_oracles(st_, so):
    m = NoiseModel(st_ * SQRT_PI, so * SQRT_PI)
    got = p_fail_analytic(m)
    assert got == pytest.approx(p_fail_series(m.sigma_tau, m.sigma_omega), abs=1e-12)
    if so > 0:
        assert got == pytest.approx(p_fail_quadrature(m.sigma_tau, m.sigma_omega), abs=1e-10)


def test_tiny_failure_keeps_relative_precision():
    m = NoiseModel(0.1 * SQRT_PI, 0.05 * SQRT_PI)
    # ~5.7e-7; a naive 1 - erf * erf would keep only ~10 significant digits
    with mpmath.workdps(50):
        et, eo = mpmath.erfc(5 / mpmath.sqrt(2)), mpmath.erfc(10 / mpmath.sqrt(2))
        expected = float(et + eo - et * eo)
    assert p_fail_analytic(m) == pytest.approx(expected, rel=1e-12)
    assert p_fail_analytic(NoiseModel(1e-5, 0)) == 0.0


widths = st.floats(min_value=0, max_value=100)


@given(widths, widths)
def test_symmetry_and_range(a, b):
    p = p_fail_analytic(NoiseModel(a, b))
    assert 0 <= p <= 1
    assert p == p_fail_analytic(NoiseModel(b, a))


def test_limits():
    assert p_fail_analytic(NoiseModel(1e-3, 1e-3)) == 0.0
    # one wide axis: 1 - erf(1/(20 sqrt 2)) ~ 0.960; both wide ~ 0.9984
    assert p_fail_analytic(NoiseModel(10 * SQRT_PI, 0)) == pytest.approx(1 - math.erf(1 / (20 * math.sqrt(2))), rel=1e-14)
    assert p_fail_analytic(NoiseModel(10 * SQRT_PI, 10 * SQRT_PI)) == pytest.approx(0.99841, abs=1e-5)
    assert p_fail_analytic(NoiseModel(1000 * SQRT_PI, 0)) >= 0.999


def test_mc_examples():
    assert p_fail_monte_carlo(NoiseModel(0, 0), 1000, 1) == (0.0, 0.0)
    m = NoiseModel(0.2 * SQRT_PI, 0.2 * SQRT_PI)
    est, err = p_fail_monte_carlo(m, 1_000_000, 7)
    assert abs(est - p_fail_analytic(m)) <= 3 * err
    assert p_fail_monte_carlo(m, 50_000, 3) == p_fail_monte_carlo(m, 50_000, 3)
    assert p_fail_monte_carlo(m, 50_000, 3) != p_fail_monte_carlo(m, 50_000, 4)
    with pytest.raises(DomainError):
        p_fail_monte_carlo(m, 0, 1)


def test_mc_ten_million_cross_check():
    m = NoiseModel(0.2 * SQRT_PI, 0.2 * SQRT_PI)
    est, err = p_fail_monte_carlo(m, 10_000_000, 2024)
    assert abs(est - p_fail_analytic(m)) <= 3 * err
    assert err < 6e-5


def test_mc_thread_count_invariant():
    m = NoiseModel(0.3, 0.4)
    assert p_fail_monte_carlo(m, 300_000, 9, threads=1) == p_fail_monte_carlo(m, 300_000, 9, threads=4)


def test_failure_map_examples():
    fm = failure_map([0.0], [0.0])
    assert fm.p_fail.tolist() == [[0.0]]
    axis = np.linspace(0.02, 0.5, 25) * SQRT_PI
    fm = failure_map(axis, axis)
    assert fm.p_fail.shape == (25, 25)
    assert np.all(np.diff(fm.p_fail, axis=0) >= 0)
    assert np.all(np.diff(fm.p_fail, axis=1) >= 0)
    assert p_fail_analytic(NoiseModel(0.2 * SQRT_PI, 0.1 * SQRT_PI)) < 0.02
    assert len(fm.rows()) == 625


@pytest.mark.parametrize("axes", [([], [0.1]), ([0.2, 0.1], [0.1]), ([-0.1], [0.1]), ([0.1, 0.1], [0.2])])
def test_failure_map_rejects_bad_axes(axes):
    with pytest.raises(DomainError):
        failure_map(*axes)


def test_failure_map_mc_reproducible_and_order_free():
    ta, oa = [0.2, 0.4, 0.6], [0.3, 0.5]
    a = failure_map(ta, oa, "mc", trials=20_000, seed=5, threads=1)
    b = failure_map(ta, oa, "mc", trials=20_000, seed=5, threads=3)
    assert np.array_equal(a.p_fail, b.p_fail)
    # a cell's value depends only on (seed, row, column): sub-maps reproduce it
    c = failure_map(ta[:1], oa, "mc", trials=20_000, seed=5)
    assert np.array_equal(a.p_fail[:1], c.p_fail)


def test_failure_line():
    rows = failure_line([0.05, 0.1, 0.2], 2.0)
    assert [r[0] for r in rows] == [0.1, 0.2, 0.4]
    assert rows[-1][2] == p_fail_analytic(NoiseModel(0.4, 0.2))
