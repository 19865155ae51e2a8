"""Three-term recurrences, Favard positivity, Jacobi operators and Gauss rules for
the Case 1 and Case 2 subfamilies.

With T1, T2 the Case 1 / Case 2 generating tables, the degree-n members are

    q_n    = T1[2n + 4]     (so q_0 = 3m/(m + 4))
    qbar_n = T2[2n + 2]     (so qbar_0 = 1)

and both satisfy c p_n = aNext[n] p_(n+1) + cPrev[n] p_(n-1) with b[n] = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum import C, ONE, ZERO, Poly
from .families import FamilyId, build_family


def _orth_family(family) -> FamilyId:
    fam = FamilyId.parse(family)
    if fam not in (FamilyId.CASE1, FamilyId.CASE2):
        raise ValueError("orthogonality is defined for case1 and case2 only")
    return fam


@dataclass(frozen=True)
class RecurrenceCoeffs:
    n: int
    a_next: Fraction
    b: Fraction
    c_prev: Fraction


def recurrence_coeffs(family, m: int, n: int) -> RecurrenceCoeffs:
    """Exact coefficients of c p_n = a_next p_(n+1) + b p_n + c_prev p_(n-1)."""
    fam = _orth_family(family)
    if n < 0:
        raise ValueError("n must be >= 0")
    if fam is FamilyId.CASE1:
        den = 2 * (2 * m * n + m + 2)
        return RecurrenceCoeffs(
            n, Fraction(2 * m * n + 3 * m + 4, den), Fraction(0), Fraction(m * (2 * n - 1), den)
        )
    den = 2 * (2 * m * n - m + 2)
    if den == 0:
        raise ValueError("case2 recurrence degenerates at m = 2 (T2[4] vanishes)")
    return RecurrenceCoeffs(
        n, Fraction(2 * m * n + m + 4, den), Fraction(0), Fraction((2 * n - 3) * m, den)
    )


def printed_case2_coeffs(m: int, n: int) -> RecurrenceCoeffs:
    """Barred recurrence coefficients as displayed (they fit q_(n+1), not qbar_n)."""
    den = 2 * (2 * m * n + 3 * m + 2)
    return RecurrenceCoeffs(n, Fraction(2 * m * n + 5 * m + 4, den), Fraction(0), Fraction(2 * m * n + m, den))


def family_polys(family, m: int, N: int) -> list[Poly]:
    """q_0..q_(N-1) (Case 1) or qbar_0..qbar_(N-1) (Case 2)."""
    fam = _orth_family(family)
    off = 4 if fam is FamilyId.CASE1 else 2
    table = build_family(m, fam, 2 * max(N - 1, 0) + off)
    return [table[2 * n + off] for n in range(N)]


def recurrence_residual(family, m: int, n: int) -> Poly:
    """c p_n - a_next p_(n+1) - c_prev p_(n-1), exactly."""
    ps = family_polys(family, m, n + 2)
    rc = recurrence_coeffs(family, m, n)
    prev = ps[n - 1] if n >= 1 else ZERO
    return C * ps[n] - ps[n + 1] * rc.a_next - prev * rc.c_prev


def lambda_squared(family, m: int, n: int, printed: bool = False) -> Fraction:
    """Symmetrizing factors lambda_n^2 = lambda_(n-1)^2 c_prev[n] / a_next[n-1], lambda_0 = 1."""
    coeffs = (lambda k: printed_case2_coeffs(m, k)) if printed else (lambda k: recurrence_coeffs(family, m, k))
    lam = Fraction(1)
    for k in range(1, n + 1):
        lam = lam * coeffs(k).c_prev / coeffs(k - 1).a_next
    return lam


def lambda_squared_closed_ratio(m: int, n: int) -> Fraction:
    """Displayed ratio lambda_n^2 / lambda_(n-1)^2."""
    return Fraction((2 * m * n + m + 2) * (2 * m * n + m), (2 * m * n + 3 * m + 4) * (2 * m * n + 3 * m + 2))


@dataclass
class FavardReport:
    family: FamilyId
    m: int
    N: int
    b_real: bool = True
    bad_products: list[int] = field(default_factory=list)
    bad_lambdas: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.b_real and not self.bad_products and not self.bad_lambdas


def favard_check(family, m: int, N: int) -> FavardReport:
    """b_n real and a_next[n-1] * c_prev[n] > 0 for 1 <= n <= N.

    The n = 0 term c_prev[0] multiplies p_(-1) = 0 and takes no part.
    """
    fam = _orth_family(family)
    if N < 1:
        raise ValueError("N must be >= 1")
    rep = FavardReport(fam, m, N)
    coeffs = [recurrence_coeffs(fam, m, n) for n in range(N + 1)]
    lam = Fraction(1)
    for n in range(1, N + 1):
        prod = coeffs[n - 1].a_next * coeffs[n].c_prev
        if prod <= 0:
            rep.bad_products.append(n)
        lam = lam * coeffs[n].c_prev / coeffs[n - 1].a_next
        if lam <= 0:
            rep.bad_lambdas.append(n)
    return rep


@dataclass(frozen=True)
class JacobiOperator:
    alpha: np.ndarray  # diagonal, length N
    beta: np.ndarray  # off-diagonal beta[1..N-1], stored with length N-1

    @property
    def size(self) -> int:
        return len(self.alpha)

    def dense(self) -> np.ndarray:
        return np.diag(self.alpha) + np.diag(self.beta, 1) + np.diag(self.beta, -1)


def jacobi_from_coeffs(a_next, c_prev, N: int) -> JacobiOperator:
    """beta_n = sqrt(a_next[n-1] c_prev[n]); the products must be positive."""
    beta = np.empty(max(N - 1, 0))
    for n in range(1, N):
        prod = Fraction(a_next[n - 1]) * Fraction(c_prev[n])
        if prod <= 0:
            raise ValueError(f"non-positive recurrence product at n={n}")
        beta[n - 1] = math.sqrt(prod)
    return JacobiOperator(np.zeros(N), beta)


def jacobi_operator(family, m: int, N: int) -> JacobiOperator:
    if N < 1:
        raise ValueError("N must be >= 1")
    coeffs = [recurrence_coeffs(family, m, n) for n in range(N)]
    return jacobi_from_coeffs([r.a_next for r in coeffs], [r.c_prev for r in coeffs], N)


class EigenNotConverged(RuntimeError):
    pass


def tridiag_eig(alpha, beta, tol: float = 1e-14, max_iter: int | None = None):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.

    Implicit-shift QL; only the first row of the eigenvector matrix is rotated,
    which is all a Gauss rule needs. Returns both arrays sorted by eigenvalue.
    """
    d = [float(x) for x in alpha]
    n = len(d)
    e = [float(x) for x in beta] + [0.0]
    z = [0.0] * n
    if n:
        z[0] = 1.0
    cap = 100 * n if max_iter is None else max_iter
    total = 0
    for l in range(n):
        while True:
            mm = l
            while mm < n - 1:
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= tol * dd or abs(e[mm]) < 1e-300:
                    break
                mm += 1
            if mm == l:
                break
            total += 1
            if total > cap:
                raise EigenNotConverged(f"no convergence after {cap} iterations")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[mm] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = mm - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[mm] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[mm] = 0.0
    order = sorted(range(n), key=lambda k: d[k])
    return np.array([d[k] for k in order]), np.array([z[k] for k in order])


@dataclass(frozen=True)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray


def gauss_from_jacobi(J: JacobiOperator, mass: float = 1.0) -> GaussRule:
    x, v = tridiag_eig(J.alpha, J.beta)
    return GaussRule(x, mass * v * v)


def gauss_rule(family, m: int, N: int, mass: float = 1.0) -> GaussRule:
    return gauss_from_jacobi(jacobi_operator(family, m, N), mass)


def orthonormal_scales(family, m: int, N: int) -> list[float]:
    """k_n with f_n = k_n p_n orthonormal for the unit-mass measure."""
    ps = family_polys(family, m, 1)
    J = jacobi_operator(family, m, N)
    k = [1.0 / float(ps[0].constant())]
    for n in range(N - 1):
        a = recurrence_coeffs(family, m, n).a_next
        k.append(k[-1] * float(a) / J.beta[n])
    return k


def gram_matrix(family, m: int, N: int) -> np.ndarray:
    rule = gauss_rule(family, m, N)
    ps = family_polys(family, m, N)
    ks = orthonormal_scales(family, m, N)
    nodes = [Fraction(float(x)) for x in rule.nodes]
    F = np.array([[k * float(p(x)) for x in nodes] for p, k in zip(ps, ks)])
    return (F * rule.weights) @ F.T


def gram_check(family, m: int, N: int) -> float:
    """max |G - I| of the orthonormalized family on its own N-point Gauss rule."""
    if N < 2:
        raise ValueError("N must be >= 2")
    G = gram_matrix(family, m, N)
    return float(np.max(np.abs(G - np.eye(N))))


def strictly_interlace(inner: np.ndarray, outer: np.ndarray) -> bool:
    """Each gap of the sorted ``outer`` set contains exactly one ``inner`` point."""
    if len(outer) != len(inner) + 1:
        return False
    return all(outer[k] < inner[k] < outer[k + 1] for k in range(len(inner)))


def interlacing_check(family, m: int, nmax: int) -> list[int]:
    """Sizes n < nmax where the zeros of p_n fail to interlace those of p_(n+1)."""
    J = jacobi_operator(family, m, nmax)
    bad = []
    prev = tridiag_eig(J.alpha[:1], J.beta[:0])[0]
    for n in range(1, nmax):
        cur = tridiag_eig(J.alpha[: n + 1], J.beta[:n])[0]
        if not strictly_interlace(prev, cur):
            bad.append(n)
        prev = cur
    return bad


def associated_ultraspherical(nu, kappa, N: int) -> list[Poly]:
    """C_0..C_N from 2x(n+nu+kappa) C_n = (n+kappa+1) C_(n+1) + (2nu+n+kappa-1) C_(n-1)."""
    nu, kappa = Fraction(nu), Fraction(kappa)
    out = [ONE]
    prev = ZERO
    for n in range(N):
        nxt = (C * out[n] * (2 * (n + nu + kappa)) - prev * (2 * nu + n + kappa - 1)) / (n + kappa + 1)
        prev = out[n]
        out.append(nxt)
    return out


def ultraspherical_params(m: int) -> tuple[Fraction, Fraction]:
    return Fraction(-1, m), Fraction(1, 2) + Fraction(2, m)


def ultraspherical_match(m: int, N: int) -> list[Poly]:
    """Residuals q_n - (3m/(m+4)) C_n for n <= N (all zero when the identification holds)."""
    nu, kappa = ultraspherical_params(m)
    Cs = associated_ultraspherical(nu, kappa, N)
    qs = family_polys(FamilyId.CASE1, m, N + 1)
    scale = Fraction(3 * m, m + 4)
    return [q - Cn * scale for q, Cn in zip(qs, Cs)]


def ultraspherical_coefficient_identities(m: int, n: int) -> tuple[bool, bool, bool]:
    """2m times the associated-ultraspherical coefficients against the q_n recurrence."""
    nu, kappa = ultraspherical_params(m)
    return (
        2 * m * (n + nu + kappa) == 2 * m * n + m + 2,
        2 * m * (n + kappa + 1) == 2 * m * n + 3 * m + 4,
        2 * m * (2 * nu + n + kappa - 1) == m * (2 * n - 1),
    )
