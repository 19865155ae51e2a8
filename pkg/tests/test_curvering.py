import itertools
from fractions import Fraction

import pytest

from supoly.curvering import CurveRing, OmegaElement, RingElement
from supoly.exactnum import C, ONE, Poly


@pytest.fixture(scope="module")
def quartic3():
    return CurveRing.quartic(3)


@pytest.fixture(scope="module")
def odd_curve():
    # u^3 = t + t^3, so a_0 = 0 and the R-type reduction is used
    return CurveRing(3, (0, 1, 0, 1))


def test_ring_mul_overflow(quartic3):
    f = RingElement.monomial(0, 2)
    g = RingElement.monomial(0, 1)
    expect = RingElement({(0, 0): ONE, (2, 0): Poly((0, -2)), (4, 0): ONE})
    assert quartic3.mul(f, g) == expect
    assert quartic3.mul(RingElement.monomial(1), RingElement.monomial(-1)) == RingElement.monomial(0)
    assert quartic3.mul(g, g) == RingElement.monomial(0, 2)


def test_reduce_examples(quartic3):
    assert quartic3.reduce_form(-2, 1) == OmegaElement.basis(-2, 1)
    w = quartic3.reduce_form(0, 1)
    assert str(w) == "9/7*w[-4,1] - 2/7*c*w[-2,1]"
    assert quartic3.reduce_form(5, 0).is_zero()
    assert quartic3.reduce_form(-1, 0) == OmegaElement.basis(-1, 0)


def test_reduce_rejects_bad_l(quartic3):
    with pytest.raises(ValueError):
        quartic3.reduce_form(0, 3)


def test_reduce_diff_examples(quartic3):
    t, tinv = RingElement.monomial(1), RingElement.monomial(-1)
    assert quartic3.reduce_diff(t, tinv) == OmegaElement.basis(-1, 0) * -1
    tu = RingElement.monomial(1, 1)
    assert quartic3.reduce_diff(tu, tu).is_zero()
    u = RingElement.monomial(0, 1)
    assert quartic3.reduce_diff(u, t) == quartic3.reduce_form(0, 1)


def test_psi_examples(quartic3):
    assert quartic3.psi(-2, 1, 1) == OmegaElement.basis(-2, 1)
    assert quartic3.psi(0, 0, 1).is_zero()
    assert quartic3.psi(0, 1, 1) == quartic3.reduce_form(0, 1)


@pytest.mark.parametrize("ring_name", ["quartic3", "odd_curve"])
def test_cocycle_antisymmetry(ring_name, request):
    ring = request.getfixturevalue(ring_name)
    monos = [RingElement.monomial(i, l) for i in range(-3, 4) for l in range(3)]
    for f, g in itertools.product(monos, repeat=2):
        assert (ring.reduce_diff(f, g) + ring.reduce_diff(g, f)).is_zero()


@pytest.mark.parametrize("ring_name", ["quartic3", "odd_curve"])
def test_exactness_relation_vanishes(ring_name, request):
    ring = request.getfixturevalue(ring_name)
    for a in range(-15, 16):
        for l in (1, 2):
            assert ring.exactness_relation(a, l).is_zero()


def test_two_directions_agree(quartic3):
    # hand-expanded three-term relation for u^3 = 1 - 2c t^2 + t^4, straddling n = 0
    m, l = 3, 1
    for n in range(-12, 12):
        s = n - 3
        lhs = quartic3.reduce_form(n, l) * (m * s + 4 * (l + m))
        rhs = quartic3.reduce_form(n - 2, l) * (C * 2 * (m * s + 2 * (l + m))) - quartic3.reduce_form(n - 4, l) * (m * s)
        assert lhs == rhs


def test_basis_slots_idempotent(quartic3, odd_curve):
    for ring in (quartic3, odd_curve):
        for n, l in ring.basis():
            assert ring.reduce_form(n, l) == OmegaElement.basis(n, l)


def test_basis_counts(quartic3, odd_curve):
    assert quartic3.basis_size() == 1 + 2 * 4
    assert odd_curve.basis_size() == 1 + 2 * 2
    assert CurveRing.quartic(5).basis_size() == 1 + 4 * 4


def test_u1_relation_sign(quartic3):
    for i in range(-6, 6):
        assert quartic3.lemma_relation(i, sign=-1).is_zero()
    assert any(not quartic3.lemma_relation(i, sign=1).is_zero() for i in range(-6, 6))


def test_large_indices_memoized(quartic3):
    w = quartic3.reduce_form(400, 1)
    assert set(w.terms) <= {(-4, 1), (-3, 1), (-2, 1), (-1, 1)}
    w2 = quartic3.reduce_form(-400, 2)
    assert set(w2.terms) <= {(-4, 2), (-3, 2), (-2, 2), (-1, 2)}


def test_invalid_curves():
    with pytest.raises(ValueError):
        CurveRing(3, (1, 0, 2))  # a_D != 1
    with pytest.raises(ValueError):
        CurveRing(3, (0, 0, 1))
    with pytest.raises(ValueError):
        CurveRing(3, (1, 2, 1))  # (1 + t)^2
    with pytest.raises(ValueError):
        CurveRing(1, (1, 1))


def test_quartic_squarefree_check_passes_for_c():
    ring = CurveRing.quartic(4)
    assert ring.a[2] == C * -2
    assert ring.basis_size() == 13


def test_rational_curve_coefficients():
    ring = CurveRing(2, (Fraction(1, 2), 0, 1))
    assert ring.basis_size() == 3
    assert ring.reduce_form(0, 1) != OmegaElement()
