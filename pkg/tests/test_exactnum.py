from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from supoly.exactnum import C, ONE, Poly, TruncatedSeries, binomial_series

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
polys = st.lists(rationals, max_size=5).map(Poly)


def series(order):
    return st.lists(polys, min_size=order + 1, max_size=order + 1).map(lambda cs: TruncatedSeries(order, cs))


def test_poly_examples():
    assert (C * C).deriv() == C * 2
    assert (C * 2 + 1)(Fraction(1, 2)) == 2
    assert (C - 1) * (C + 1) == C * C - 1


def test_zero_poly_and_degree():
    assert Poly().degree == -1
    assert Poly([0, 0]).is_zero()
    assert Poly([1, 2, 0]).coeffs == (1, 2)
    assert str(Poly([Fraction(-2, 7)]) * C) == "-2/7*c"
    assert str(C * C + 1) == "c^2 + 1"


def test_float_evaluation_path():
    assert (C * C - 1)(0.5) == pytest.approx(-0.75)


def test_division_only_by_constants():
    with pytest.raises(ZeroDivisionError):
        C / C
    with pytest.raises(ZeroDivisionError):
        C / 0
    assert (C * 4) / 2 == C * 2


def test_gcd_detects_repeated_root():
    p = (C - 1) * (C - 1) * (C + 2)
    assert p.gcd(p.deriv()) == C - 1
    assert (C * C - 2).gcd((C * C - 2).deriv()) == ONE


def test_series_examples():
    s = TruncatedSeries(2, [1, 0, 1])
    assert s.zscale() == TruncatedSeries(2, [0, 0, 2])
    assert TruncatedSeries(2, [1, 1]) * TruncatedSeries(2, [1, -1]) == TruncatedSeries(2, [1, 0, -1])
    assert TruncatedSeries(3, [0, 0, 0, 1]).zderiv() == TruncatedSeries(3, [0, 0, 3])


def test_series_order_mismatch():
    with pytest.raises(ValueError):
        TruncatedSeries(2, [1]) + TruncatedSeries(3, [1])


def test_binomial_examples():
    z = TruncatedSeries(2, [0, 1])
    assert binomial_series(z, 1) == TruncatedSeries(2, [1, 1])
    assert binomial_series(z, Fraction(1, 2)) == TruncatedSeries(2, [1, Fraction(1, 2), Fraction(-1, 8)])
    s = TruncatedSeries.from_terms(12, {2: C * -2, 4: 1})
    one = TruncatedSeries.from_terms(12, {0: 1})
    assert binomial_series(s, Fraction(1, 3)) * binomial_series(s, Fraction(-1, 3)) == one


def test_binomial_rejects_constant_term():
    with pytest.raises(ValueError):
        binomial_series(TruncatedSeries(3, [1, 1]), Fraction(1, 2))


@settings(max_examples=40, deadline=None)
@given(series(4), series(4), series(4))
def test_series_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(st.lists(polys, min_size=6, max_size=6), rationals, rationals)
def test_binomial_exponent_additivity(cs, alpha, beta):
    s = TruncatedSeries(5, [Poly()] + cs[1:])
    assert binomial_series(s, alpha + beta) == binomial_series(s, alpha) * binomial_series(s, beta)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_results_stay_canonical(p, q):
    for r in (p + q, p - q, p * q, p.deriv()):
        assert not r.coeffs or r.coeffs[-1] != 0
        for a in r.coeffs:
            assert a.denominator > 0 and gcd(a.numerator, a.denominator) == 1


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_divmod_reconstructs(p, q):
    if q.is_zero():
        return
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree
