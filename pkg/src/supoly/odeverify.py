"""Fourth-order ODE/PDE checks for the Case 1 and Case 2 families, and the
banded linear systems behind the uniqueness of their polynomial solutions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import C, ONE, ZERO, Poly, TruncatedSeries
from .families import FamilyId, FamilyTable, build_family

_ODE_FAMILIES = (FamilyId.CASE1, FamilyId.CASE2)


def _ode_family(family) -> FamilyId:
    fam = FamilyId.parse(family)
    if fam not in _ODE_FAMILIES:
        raise ValueError("fourth-order ODEs exist only for case1 and case2")
    return fam


@dataclass(frozen=True)
class OdeOperator:
    family: FamilyId
    m: int
    n: int
    coeffs: tuple[Poly, Poly, Poly, Poly, Poly]  # multipliers of P, P', P'', P''', P''''

    def apply(self, p: Poly) -> Poly:
        out = ZERO
        d = p
        for a in self.coeffs:
            if d.is_zero():
                break
            out = out + a * d
            d = d.deriv()
        return out


def ode_operator(family, m: int, n: int) -> OdeOperator:
    fam = _ode_family(family)
    c2 = C * C
    a4 = (c2 - 1) * (c2 - 1) * (16 * m * m)
    a3 = C * (c2 - 1) * (160 * m * m)
    if fam is FamilyId.CASE1:
        a2 = Poly.const(8 * m * (m * ((n - 6) * n - 10) + 4 * (n - 6))) - c2 * (
            8 * (m * m * (n - 10) * (n + 4) + 4 * m * (n - 4) + 8)
        )
        a1 = C * (-24 * (m * m * (n - 6) * n + 4 * m * (n - 4) + 8))
        a0 = Poly.const((n - 4) * n * (m * (n - 6) + 4) * (m * (n - 2) + 4))
    else:
        a2 = Poly.const(8 * m * (m * (n * n - 6 * n - 2) + 4 * (n - 8))) - c2 * (
            8 * (m * m * ((n - 6) * n - 32) + 4 * m * (n - 6) + 8)
        )
        a1 = C * (-24 * (m * m * (n - 4) * (n - 2) + 4 * m * (n - 6) + 8))
        a0 = Poly.const((n * n - 4) * (m * n - 8 * m + 4) * (m * n - 4 * m + 4))
    return OdeOperator(fam, m, n, (a0, a1, a2, a3, a4))


def ode_residual(family, m: int, n: int, p: Poly) -> Poly:
    return ode_operator(family, m, n).apply(p)


def ode_sweep(family, m: int, nmax: int) -> list[int]:
    """Indices n <= nmax whose family member fails the ODE (expected: none)."""
    table = build_family(m, family, nmax)
    return [n for n in range(nmax + 1) if not ode_residual(family, m, n, table[n]).is_zero()]


# PDE in (c, v = log z): d/dv acts on z^k as multiplication by k.

PRINTED_CASE2_CC = "printed"
CORRECTED_CASE2_CC = "corrected"


def pde_cc_coefficient(family, m: int, variant: str = PRINTED_CASE2_CC) -> Fraction:
    """Multiplier of d^2/dc^2 outside the squared operator."""
    fam = _ode_family(family)
    m = Fraction(m)
    if fam is FamilyId.CASE1:
        return 16 * (m * m - 8 * m)
    if variant == PRINTED_CASE2_CC:
        return 144 * m * m
    if variant == CORRECTED_CASE2_CC:
        return 144 * m * m - 256 * m
    raise ValueError(f"unknown operator variant {variant!r}")


def pde_coefficient_residual(family, m: int, k: int, p: Poly, variant: str = PRINTED_CASE2_CC) -> Poly:
    """PDE applied to the single term p(c) z^k, divided by z^k."""
    fam = _ode_family(family)
    mf = Fraction(m)
    const = 4 * (1 - 2 / mf) if fam is FamilyId.CASE1 else Fraction(-4)
    shift = k * k + 2 * (2 / mf - 3) * k + const
    mix = 16 * (2 - mf) ** 2 if fam is FamilyId.CASE1 else 16 * (3 * mf - 2) ** 2

    def inner(q: Poly) -> Poly:
        return (ONE - C * C) * q.deriv(2) * 4 - C * q.deriv() * 12 + q * shift

    def euler(q: Poly) -> Poly:
        return C * q.deriv() + q

    return (
        inner(inner(p)) * (mf * mf)
        + p.deriv(2) * pde_cc_coefficient(fam, m, variant)
        - euler(euler(p)) * mix
    )


def pde_residual(family, m: int, N: int, variant: str = PRINTED_CASE2_CC) -> TruncatedSeries:
    """Fourth-order PDE applied coefficient-wise to the generating series up to z^N."""
    table = build_family(m, family, N)
    return TruncatedSeries(
        N, [pde_coefficient_residual(family, m, k, table[k], variant) for k in range(N + 1)]
    )


def boundary_ok(table: FamilyTable) -> bool:
    """Initial z-coefficients: Case 1 is (1, 0, 0, 0), Case 2 is (0, 0, 1, 0)."""
    want = _ode_family(table.family).initial
    return all(table[k] == Poly.const(v) for k, v in enumerate(want) if k <= table.order)


# uniqueness system: p = sum_i x_i c^i, L[c^i] lands on c^i, c^(i-2), c^(i-4)


def diagonal_closed_form(family, m: int, n: int, i: int) -> int:
    fam = _ode_family(family)
    if fam is FamilyId.CASE1:
        return (2 * i - n + 4) * (2 * i + n) * (m * (2 * i - n + 6) - 4) * (m * (2 * i + n - 2) + 4)
    return (4 * (i + 1) ** 2 - n * n) * (m * (2 * i - n + 8) - 4) * (m * (2 * i + n - 4) + 4)


@dataclass(frozen=True)
class UniquenessSystem:
    family: FamilyId
    m: int
    n: int
    r: int
    rows: tuple[tuple[Fraction, ...], ...]  # rows[k][i]: coefficient of c^k in L[c^i]

    def diagonal(self, i: int) -> Fraction:
        return self.rows[i][i]

    def apply(self, x) -> list[Fraction]:
        return [sum((a * xi for a, xi in zip(row, x)), Fraction(0)) for row in self.rows]

    def is_banded_upper(self) -> bool:
        for k, row in enumerate(self.rows):
            for i, a in enumerate(row):
                if a != 0 and i - k not in (0, 2, 4):
                    return False
        return True


def uniqueness_system(family, m: int, n: int, r: int | None = None) -> UniquenessSystem:
    fam = _ode_family(family)
    r = n if r is None else r
    if r < 0:
        raise ValueError("degree bound must be >= 0")
    op = ode_operator(fam, m, n)
    cols = [op.apply(Poly.monomial(i)) for i in range(r + 1)]
    rows = tuple(tuple(cols[i][k] for i in range(r + 1)) for k in range(r + 1))
    return UniquenessSystem(fam, m, n, r, rows)


def _nullspace(mat: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Null-space basis of a small dense rational matrix by reduced row echelon form."""
    rows = [list(r) for r in mat if any(r)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        rows[rank] = [a / lead for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][free]
        basis.append(v)
    return basis


def solve_nullspace(system: UniquenessSystem) -> list[list[Fraction]]:
    """Null space by back-substitution; zero diagonals become free parameters.

    Each unknown is carried as a linear form in the free parameters. A row with a
    zero diagonal does not determine its unknown but constrains the higher ones;
    those constraints are solved at the end.
    """
    R = system.r
    forms: list[dict[int, Fraction]] = [{}] * (R + 1)
    nfree = 0
    free_of: dict[int, int] = {}
    constraints: list[dict[int, Fraction]] = []

    def combo(k: int) -> dict[int, Fraction]:
        acc: dict[int, Fraction] = {}
        row = system.rows[k]
        for off in (2, 4):
            i = k + off
            if i <= R and row[i] != 0:
                for p, v in forms[i].items():
                    acc[p] = acc.get(p, Fraction(0)) + row[i] * v
        return acc

    for k in range(R, -1, -1):
        d = system.rows[k][k]
        rest = combo(k)
        if d != 0:
            forms[k] = {p: -v / d for p, v in rest.items() if v != 0}
        else:
            free_of[k] = nfree
            forms[k] = {nfree: Fraction(1)}
            nfree += 1
            constraints.append(rest)
    mat = [[con.get(p, Fraction(0)) for p in range(nfree)] for con in constraints]
    params = _nullspace(mat, nfree)
    basis = []
    for vec in params:
        x = [sum((v * vec[p] for p, v in forms[k].items()), Fraction(0)) for k in range(R + 1)]
        basis.append(x)
    return basis


def uniqueness_solve(family, m: int, n: int, r: int | None = None) -> tuple[int, list[Poly]]:
    """Dimension and basis (as polynomials) of the polynomial solutions of degree <= r."""
    system = uniqueness_system(family, m, n, r)
    basis = solve_nullspace(system)
    return len(basis), [Poly(v) for v in basis]


def proportional(p: Poly, q: Poly) -> bool:
    """True if p = s*q for a nonzero rational s (both nonzero)."""
    if p.is_zero() or q.is_zero() or p.degree != q.degree:
        return False
    s = p.leading() / q.leading()
    return p == q * s


def in_span(member: Poly, basis: list[Poly]) -> bool:
    """Membership of a family member in a null space of dimension <= 1."""
    if member.is_zero():
        return True
    return len(basis) == 1 and proportional(member, basis[0])
