"""Polynomial families of the quartic curve u^m = 1 - 2ct^2 + t^4 and their generating series.

Every family obeys

    (k m + m + 4) P_k = 2c((k - 1) m + 2) P_(k-2) - (k - 3) m P_(k-4),   k >= 0,

and differs only in the initial values P_-4..P_-1. A :class:`FamilyTable`
stores the generating-series coefficients: ``polys[k]`` is the coefficient of
``z^k``, i.e. ``P_(k-4)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import C, ONE, ZERO, Poly, TruncatedSeries, binomial_series


class FamilyId(enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"

    @property
    def initial(self) -> tuple[int, int, int, int]:
        """Values of (P_-4, P_-3, P_-2, P_-1), i.e. the z^0..z^3 coefficients."""
        return {
            FamilyId.CASE1: (1, 0, 0, 0),
            FamilyId.CASE2: (0, 0, 1, 0),
            FamilyId.CASE3: (0, 0, 0, 1),
            FamilyId.CASE4: (0, 1, 0, 0),
        }[self]

    @classmethod
    def parse(cls, s) -> "FamilyId":
        if isinstance(s, FamilyId):
            return s
        return cls(str(s).lower())


@dataclass(frozen=True)
class FamilyTable:
    m: int
    family: FamilyId
    polys: tuple[Poly, ...]

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, k: int) -> Poly:
        return self.polys[k]

    def series(self, order: int | None = None) -> TruncatedSeries:
        N = self.order if order is None else order
        if N > self.order:
            raise ValueError("table too short for requested order")
        return TruncatedSeries(N, self.polys[: N + 1])


def _check_m(m) -> int:
    if int(m) != m or m < 2:
        raise ValueError("m must be an integer >= 2")
    return int(m)


@lru_cache(maxsize=64)
def _build(m: int, family: FamilyId, N: int) -> tuple[Poly, ...]:
    polys = [Poly.const(v) for v in family.initial][: N + 1]
    for k in range(4, N + 1):
        j = k - 4
        div = j * m + m + 4
        assert div != 0
        nxt = (C * polys[k - 2]) * (2 * ((j - 1) * m + 2)) - polys[k - 4] * ((j - 3) * m)
        polys.append(nxt / div)
    return tuple(polys)


def build_family(m: int, family, N: int) -> FamilyTable:
    """Generating-series coefficients ``z^0 .. z^N`` of the requested family."""
    m = _check_m(m)
    if N < 0:
        raise ValueError("N must be >= 0")
    fam = FamilyId.parse(family)
    return FamilyTable(m, fam, _build(m, fam, N))


@lru_cache(maxsize=256)
def _gegenbauer_list(lam: Fraction, n: int) -> tuple[Poly, ...]:
    out = [ONE]
    if n >= 1:
        out.append(C * (2 * lam))
    for k in range(2, n + 1):
        nxt = (C * out[k - 1]) * (2 * (k + lam - 1)) - out[k - 2] * (k + 2 * lam - 2)
        out.append(nxt / k)
    return tuple(out[: n + 1])


def gegenbauer(lam, n: int) -> Poly:
    """Gegenbauer polynomial ``C_n^(lam)(c)`` from the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _gegenbauer_list(Fraction(lam), n)[n]


def gegenbauer_list(lam, n: int) -> tuple[Poly, ...]:
    return _gegenbauer_list(Fraction(lam), n)


def gegenbauer_ode_residual(lam, n: int) -> Poly:
    lam = Fraction(lam)
    q = gegenbauer(lam, n)
    return (ONE - C * C) * q.deriv(2) - C * q.deriv() * (2 * lam + 1) + q * (n * (2 * lam + n))


def szego_identity_check(m: int, n: int) -> Poly:
    """Residual of (1 - c^2) Q_n' = c (2 lam + n) Q_n - (n + 1) Q_(n+1), lam = 1 + 1/m."""
    lam = 1 + Fraction(1, m)
    qs = gegenbauer_list(lam, n + 1)
    lhs = (ONE - C * C) * qs[n].deriv()
    rhs = C * qs[n] * (2 * lam + n) - qs[n + 1] * (n + 1)
    return lhs - rhs


def quartic_series(order: int) -> TruncatedSeries:
    """``-2cz^2 + z^4`` so that ``1 + s`` is the quartic."""
    return TruncatedSeries.from_terms(order, {2: Poly((0, -2)), 4: ONE})


def normalized_generating_series(m: int, family, N: int) -> TruncatedSeries:
    """``(1 - 2cz^2 + z^4)^(-1/m)`` times the generating series, truncated at N."""
    table = build_family(m, family, N)
    return binomial_series(quartic_series(N), Fraction(-1, m)) * table.series()


def gegenbauer_side(m: int, family, N: int) -> TruncatedSeries:
    """Gegenbauer-sum side of the normalized expansion identity.

    The common fractional factor ``z^(3 - 4/m)`` is divided out, so all powers
    of ``z`` are integers. Case 1 is grouped by power of ``z``: the ``z^(2k)``
    coefficient is ``[(6m - 4) c Q_(k-1) - (3m - 4) Q_k] / (m(2k - 3) + 4)``,
    whose 0/0 instance (``m = 4, k = 1``) takes its limit ``2c/m``.
    """
    m = _check_m(m)
    fam = FamilyId.parse(family)
    lam = 1 + Fraction(1, m)
    Q = gegenbauer_list(lam, N // 2 + 2)
    terms: dict[int, Poly] = {}
    if fam is FamilyId.CASE1:
        for k in range(0, N // 2 + 1):
            num = -Q[k] * (3 * m - 4)
            if k >= 1:
                num = num + C * Q[k - 1] * (6 * m - 4)
            den = m * (2 * k - 3) + 4
            if den == 0:
                assert num.is_zero()
                terms[2 * k] = C * Fraction(2, m)
            else:
                terms[2 * k] = num / den
    elif fam is FamilyId.CASE3:
        for n in range(0, (N - 3) // 2 + 1):
            terms[2 * n + 3] = Q[n] * Fraction(4, 2 * m * n + 4)
    elif fam is FamilyId.CASE4:
        for n in range(0, N // 2 + 1):
            # n = 0 with m = 2 is 0/0; the limit of -(m - 2)/(2 - m) is 1
            lo = Fraction(1) if n == 0 else Fraction(-(m - 2), m * (n - 1) + 2)
            terms[2 * n + 1] = terms.get(2 * n + 1, ZERO) + Q[n] * lo
            terms[2 * n + 3] = terms.get(2 * n + 3, ZERO) + C * Q[n] * Fraction(2 * (m - 1), m * n + 2)
    else:
        raise ValueError("no Gegenbauer expansion for case2")
    return TruncatedSeries.from_terms(N, terms)


def printed_case4_side(m: int, N: int) -> TruncatedSeries:
    """Case 4 sum exactly as displayed: 1/2 sum Q_n [(m-2) z^(2n+1)/(m(n-1)+2) - 2c(m-1) z^(2n+3)/(mn+2)]."""
    lam = 1 + Fraction(1, m)
    Q = gegenbauer_list(lam, N // 2 + 2)
    terms: dict[int, Poly] = {}
    for n in range(0, N // 2 + 1):
        den = m * (n - 1) + 2
        if den == 0:
            raise ZeroDivisionError("displayed case 4 sum is singular for m = 2")
        terms[2 * n + 1] = terms.get(2 * n + 1, ZERO) + Q[n] * Fraction(m - 2, 2 * den)
        terms[2 * n + 3] = terms.get(2 * n + 3, ZERO) - C * Q[n] * Fraction(m - 1, m * n + 2)
    return TruncatedSeries.from_terms(N, terms)


def expansion_check(m: int, family, N: int) -> TruncatedSeries:
    """Exact residual between the normalized generating series and its Gegenbauer sum."""
    fam = FamilyId.parse(family)
    if fam is FamilyId.CASE2:
        raise ValueError("no Gegenbauer expansion for case2")
    return normalized_generating_series(m, fam, N) - gegenbauer_side(m, fam, N)


def generating_ode_residual(table: FamilyTable) -> TruncatedSeries:
    """First-order z-ODE of the generating series with denominators cleared.

    m z (1 - 2cz^2 + z^4) P' + (4 - 3m + (6m - 4) c z^2 - 3m z^4) P = source(z),
    where the source collects the initial values. Valid through order N - 1.
    """
    m, N = table.m, table.order
    P = table.series()
    p4, p3, p2, p1 = (Poly.const(v) for v in table.family.initial)
    z = lambda k, a: TruncatedSeries.from_terms(N, {k: a})  # noqa: E731
    quartic_z = z(1, m) + z(3, C * (-2 * m)) + z(5, m)
    mult = z(0, 4 - 3 * m) + z(2, C * (6 * m - 4)) + z(4, -3 * m)
    source = (
        z(3, p1 * 4)
        + z(2, p2 * (4 - m))
        + z(3, C * p3 * (4 * (m - 1))) + z(1, p3 * (4 - 2 * m))
        + z(2, C * p4 * (6 * m - 4)) + z(0, p4 * (4 - 3 * m))
    )
    res = quartic_z * P.zderiv() + mult * P - source
    return TruncatedSeries(N, list(res.coeffs[:N]) + [ZERO])


def reference_closed_forms(m: int) -> dict:
    """Displayed closed forms of the first Case 1 / Case 2 coefficients (keyed by z-power)."""
    m = Fraction(m)
    c = C
    case1 = {
        0: ONE,
        4: Poly.const(3 * m / (m + 4)),
        6: c * (6 * m * (m + 2) / ((m + 4) * (3 * m + 4))),
        8: (c * c * (4 * (m + 2) * (3 * m + 2)) - m * (3 * m + 4))
        * (3 * m / ((m + 4) * (3 * m + 4) * (5 * m + 4))),
        10: c * (c * c * (2 * (m + 2) * (5 * m + 2)) - m * (5 * m + 8))
        * (12 * m * (3 * m + 2) / ((m + 4) * (3 * m + 4) * (5 * m + 4) * (7 * m + 4))),
        12: (
            c ** 4 * (16 * (m + 2) * (3 * m + 2) * (5 * m + 2) * (7 * m + 2))
            - c * c * (12 * m * (3 * m + 2) * (5 * m + 2) * (7 * m + 12))
            + 5 * m * m * (3 * m + 4) * (7 * m + 4)
        ) * (3 * m / ((m + 4) * (3 * m + 4) * (5 * m + 4) * (7 * m + 4) * (9 * m + 4))),
    }
    case2 = {
        2: ONE,
        4: c * (-2 * (m - 2) / (m + 4)),
        6: (Poly.const(m * (m + 4)) - c * c * (4 * (m * m - 4))) / ((m + 4) * (3 * m + 4)),
        8: c * (c * c * (2 * (m - 2) * (3 * m + 2)) - 3 * m * m)
        * (-4 * (m + 2) / ((m + 4) * (3 * m + 4) * (5 * m + 4))),
    }
    return {FamilyId.CASE1: case1, FamilyId.CASE2: case2}


def parity_ok(table: FamilyTable) -> bool:
    """Every coefficient is even or odd in ``c`` according to its degree."""
    for p in table.polys:
        if p.is_zero():
            continue
        sign = -1 if p.degree % 2 else 1
        if p.reflect() != p * sign:
            return False
    return True
