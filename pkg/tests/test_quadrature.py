import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from supoly.quadrature import (
    CSV_COLUMNS,
    IntegralSpec,
    QuadratureError,
    adaptive_gk,
    compare_grid,
    default_grid,
    gk15,
    integral_value,
    max_deviation,
    regularized_bracket,
    series_value,
)


def test_gk15_polynomial_exact():
    v, err = gk15(lambda x: x ** 10 - 3 * x ** 3, -1.0, 2.0)
    assert v == pytest.approx((2 ** 11 + 1) / 11 - 3 * (16 - 1) / 4, rel=1e-14)
    assert err < 1e-10


@pytest.mark.parametrize("f,a,b", [
    (np.cos, 0.0, 10.0),
    (lambda x: np.sqrt(x), 0.0, 1.0),
    (lambda x: 1.0 / (1.0 + 100.0 * x * x), -1.0, 1.0),
])
def test_adaptive_against_scipy(f, a, b):
    got = adaptive_gk(f, a, b, 1e-12)
    want, _ = integrate.quad(f, a, b, epsabs=1e-13, limit=500)
    assert got.value == pytest.approx(want, abs=1e-11)


def test_adaptive_budget():
    with pytest.raises(QuadratureError):
        adaptive_gk(lambda x: np.abs(x - 0.3) ** -0.9, 0.0, 1.0, 1e-14, max_intervals=20)


def test_adaptive_refinement_monotone():
    f = lambda x: np.abs(x - 1 / 3) ** 0.5
    counts = [adaptive_gk(f, 0.0, 1.0, tol).intervals for tol in (1e-4, 1e-7, 1e-10)]
    assert counts == sorted(counts)


def test_small_z_limit():
    assert integral_value(IntegralSpec("case1", 3, 0.2, 1e-3)) == pytest.approx(1.0, abs=1e-5)
    assert series_value("case1", 3, 0.2, 0.0) == 1.0
    assert series_value("case2", 3, 0.2, 0.0) == 0.0


@pytest.mark.parametrize("fam,m,c,z", [
    ("case1", 3, 0.3, 0.4),
    ("case1", 4, 0.5, 0.3),
    ("case2", 4, 0.5, 0.3),
    ("case2", 5, -0.6, 0.2),
    ("case1", 7, 0.0, 0.5),
    ("case1", 2, 0.1, 0.1),
])
def test_integral_matches_series(fam, m, c, z):
    assert integral_value(IntegralSpec(fam, m, c, z)) == pytest.approx(series_value(fam, m, c, z), abs=1e-8)


def test_homogeneous_constants():
    assert integral_value(IntegralSpec("case1", 4, 0.5, 0.3), True).homogeneous == pytest.approx(0.25)
    assert integral_value(IntegralSpec("case2", 4, 0.5, 0.3), True).homogeneous == pytest.approx(1.0)
    assert integral_value(IntegralSpec("case1", 3, 0.5, 0.3), True).homogeneous == 0.0


def test_series_orders_agree():
    assert series_value("case1", 3, 0.7, 0.5, N=80) == pytest.approx(series_value("case1", 3, 0.7, 0.5, N=120), abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8), st.floats(-0.9, 0.9), st.floats(0.05, 0.6))
def test_case1_even_in_z(m, c, z):
    # Case 1 carries only even powers of z
    assert series_value("case1", m, c, z) == pytest.approx(series_value("case1", m, c, -z), abs=1e-13)


def test_grid_point_precision():
    assert abs(integral_value(IntegralSpec("case1", 3, 0.0, 0.1)) - series_value("case1", 3, 0.0, 0.1)) <= 1e-12


@pytest.mark.parametrize("fam,m", [("case1", 3), ("case1", 6), ("case2", 3), ("case2", 5)])
def test_bracket_eps_invariance_derived(fam, m):
    s = IntegralSpec(fam, m, 0.5, 0.3)
    a = regularized_bracket(s, 1e-4)
    b = regularized_bracket(s, 1e-6)
    assert a == pytest.approx(b, abs=1e-6)
    assert b == pytest.approx(integral_value(s, True).finite_part, abs=1e-8)


@pytest.mark.parametrize("m", [4, 5, 6])
def test_bracket_printed_counterterm_diverges(m):
    s = IntegralSpec("case1", m, 0.5, 0.3)
    assert abs(regularized_bracket(s, 1e-4, "printed") - regularized_bracket(s, 1e-8, "printed")) > 1.0


def test_bracket_eps_range():
    with pytest.raises(ValueError):
        regularized_bracket(IntegralSpec("case1", 3, 0.5, 0.3), 0.5)
    with pytest.raises(ValueError):
        regularized_bracket(IntegralSpec("case1", 3, 0.5, 0.3), 1e-4, "other")


@pytest.mark.parametrize("kwargs", [
    dict(family="case3", m=3, c=0.1, z=0.1),
    dict(family="case1", m=1, c=0.1, z=0.1),
    dict(family="case1", m=3, c=1.0, z=0.1),
    dict(family="case1", m=3, c=0.1, z=1.0),
    dict(family="case1", m=3, c=0.1, z=0.1, tol=0.0),
])
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        IntegralSpec(**kwargs)


def test_series_divergence():
    with pytest.raises(ValueError):
        series_value("case1", 3, 0.1, 1.0)


def test_compare_grid_small():
    rows = compare_grid("case1", 3, [(0.3, 0.2), (-0.6, 0.4)])
    assert [set(r) for r in rows] == [set(CSV_COLUMNS)] * 2
    assert max_deviation(rows) <= 1e-10
    assert len(default_grid()) == 35
    assert all(math.isfinite(r["integral"]) for r in rows)
