"""Superelliptic integral representations of the Case 1 / Case 2 generating series.

For both families

    P(c, z) = z^(3-4/m) (1 - 2cz^2 + z^4)^(1/m) * [ FP int_0^z f(w) dw + K ],
    f(w) = (a0 + a2 w^2) / m * w^alpha * (1 - 2cw^2 + w^4)^(-1-1/m),

with (alpha, a0, a2) = (4/m - 4, 4 - 3m, 2c(3m - 2)) for Case 1 and
(4/m - 2, 4 - m, 0) for Case 2. FP is the Hadamard finite part at w = 0, which
is what the epsilon counterterms produce. Expanding the last factor with
Gegenbauer polynomials of index lam = 1 + 1/m gives f(w) = sum_k h_k w^(alpha+2k)
with h_k = (a0 Q_k + a2 Q_(k-1)) / m.

K is a multiple of the homogeneous solution. It can only be nonzero when
3 - 4/m is an integer, and is then fixed by the initial coefficients.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .families import FamilyId

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (nonnegative half)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_X15 = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_IDX = [1, 3, 5, 7, 9, 11, 13]  # positions of the 7 Gauss nodes in _X15
_W7 = np.concatenate([_WG[:-1], _WG[::-1]])

MAX_INTERVALS = 100_000


class QuadratureError(RuntimeError):
    pass


def gk15(f, a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel: (Kronrod value, |Kronrod - Gauss|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = f(mid + half * _X15)
    k = half * float(np.dot(_W15, fx))
    g = half * float(np.dot(_W7, fx[_GAUSS_IDX]))
    return k, abs(k - g)


@dataclass(frozen=True)
class AdaptiveResult:
    value: float
    error: float
    intervals: int


def adaptive_gk(f, a: float, b: float, tol: float, max_intervals: int = MAX_INTERVALS) -> AdaptiveResult:
    """Globally adaptive G7K15: halve the worst panel until the summed estimate <= tol."""
    if b <= a:
        return AdaptiveResult(0.0, 0.0, 0)
    v, e = gk15(f, a, b)
    heap = [(-e, a, b, v)]
    total_v, total_e = v, e
    count = 1
    while total_e > tol:
        if count >= max_intervals:
            raise QuadratureError(f"subdivision budget of {max_intervals} intervals exhausted")
        ne, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        total_v += v1 + v2 - val
        total_e += e1 + e2 + ne
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        count += 1
    # re-sum to shed accumulated rounding from the running totals
    total_v = math.fsum(item[3] for item in heap)
    total_e = math.fsum(-item[0] for item in heap)
    return AdaptiveResult(total_v, total_e, count)


@dataclass(frozen=True)
class IntegralSpec:
    family: FamilyId
    m: int
    c: float
    z: float
    tol: float = 1e-10

    def __post_init__(self):
        fam = FamilyId.parse(self.family)
        if fam not in (FamilyId.CASE1, FamilyId.CASE2):
            raise ValueError("integral formulas exist for case1 and case2 only")
        object.__setattr__(self, "family", fam)
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("m must be an integer >= 2")
        if not -1.0 < self.c < 1.0:
            raise ValueError("c must lie in (-1, 1)")
        if not 0.0 < self.z < 1.0:
            raise ValueError("z must lie in (0, 1)")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def _gegenbauer_floats(lam: float, c: float, K: int) -> list[float]:
    q = [1.0, 2.0 * lam * c]
    for n in range(2, K + 1):
        q.append((2.0 * c * (n + lam - 1) * q[n - 1] - (n + 2 * lam - 2) * q[n - 2]) / n)
    return q[: K + 1]


@dataclass(frozen=True)
class _Integrand:
    alpha: float
    a0: float
    a2: float
    m: int
    c: float

    def h(self, K: int) -> list[float]:
        Q = _gegenbauer_floats(1.0 + 1.0 / self.m, self.c, K)
        return [(self.a0 * Q[k] + (self.a2 * Q[k - 1] if k else 0.0)) / self.m for k in range(K + 1)]

    def __call__(self, w):
        quart = 1.0 - 2.0 * self.c * w * w + w ** 4
        return (self.a0 + self.a2 * w * w) / self.m * w ** self.alpha * quart ** (-1.0 - 1.0 / self.m)


def _integrand(spec: IntegralSpec) -> _Integrand:
    m = spec.m
    if spec.family is FamilyId.CASE1:
        return _Integrand(4.0 / m - 4.0, 4.0 - 3.0 * m, 2.0 * spec.c * (3.0 * m - 2.0), m, spec.c)
    return _Integrand(4.0 / m - 2.0, 4.0 - m, 0.0, m, spec.c)


def _is_zero_exp(p: float) -> bool:
    return abs(p) < 1e-12


def _finite_part_power(p: float, z: float) -> float:
    """Finite part of int_0^z w^(p-1) dw."""
    return math.log(z) if _is_zero_exp(p) else z ** p / p


_TAIL_TERMS = 400
_DELTA = 0.02


def _tail(f: _Integrand, h: list[float], k0: int, x: float) -> float:
    """sum_(k>=k0) h_k x^(alpha+2k+1)/(alpha+2k+1): int_0^x of the unsubtracted terms."""
    out = []
    for k in range(k0, len(h)):
        p = f.alpha + 2 * k + 1
        t = h[k] * x ** p / p
        out.append(t)
        if k > k0 + 4 and abs(t) < 1e-20 * (1.0 + abs(out[0])):
            break
    return math.fsum(out)


def _subtraction_order(f: _Integrand) -> int:
    """Number of leading terms removed so that the remainder is O(w^2) at 0."""
    k = 0
    while f.alpha + 2 * k < 2:
        k += 1
    return k


def _homogeneous_constant(spec: IntegralSpec, f: _Integrand, h: list[float]) -> float:
    """Multiple K of the homogeneous solution z^(3-4/m) Q^(1/m) fixed by the initial data."""
    e = 3 - Fraction(4, spec.m)
    if e.denominator != 1:
        return 0.0
    e = int(e)
    target = float(spec.family.initial[e])
    # particular solution z^e Q^(1/m) * sum_k g_k z^(alpha + 2k + 1) with alpha + 1 + e = 0 or 2
    s = int(round(f.alpha + 1 + e))
    g = {}
    for k in range(len(h)):
        p = f.alpha + 2 * k + 1
        if s + 2 * k > e:
            break
        if _is_zero_exp(p):
            if abs(h[k]) > 1e-12 * (1.0 + abs(h[0])):
                raise QuadratureError("logarithmic resonance with nonzero coefficient")
            continue
        g[s + 2 * k] = h[k] / p
    # coefficients of Q^(1/m) in z^2: Gegenbauer polynomials of index -1/m
    root = _gegenbauer_floats(-1.0 / spec.m, spec.c, e // 2 + 1)
    coef = sum(gv * root[(e - pw) // 2] for pw, gv in g.items() if (e - pw) >= 0 and (e - pw) % 2 == 0)
    return target - coef


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    intervals: int
    finite_part: float
    homogeneous: float


def _remainder_integral(f: _Integrand, h: list[float], K: int, z: float, tol: float) -> AdaptiveResult:
    """int_0^z of f minus its first K expansion terms: series on [0, delta], G7K15 beyond."""
    delta = min(_DELTA, z)
    near = _tail(f, h, K, delta)
    alphas = np.array([f.alpha + 2 * k for k in range(K)])
    hk = np.array(h[:K])

    def remainder(w):
        w = np.asarray(w, dtype=float)
        return f(w) - (hk[None, :] * w[:, None] ** alphas[None, :]).sum(axis=1)

    far = adaptive_gk(remainder, delta, z, tol)
    return AdaptiveResult(near + far.value, far.error, far.intervals)


def integral_value(spec: IntegralSpec, full_output: bool = False):
    """P(c, z) from the finite-part integral with endpoint singularity subtraction."""
    f = _integrand(spec)
    K = _subtraction_order(f)
    h = f.h(_TAIL_TERMS)
    z = spec.z
    pref = z ** (3.0 - 4.0 / spec.m) * (1.0 - 2.0 * spec.c * z * z + z ** 4) ** (1.0 / spec.m)
    sing = math.fsum(h[k] * _finite_part_power(f.alpha + 2 * k + 1, z) for k in range(K))
    rem = _remainder_integral(f, h, K, z, 0.1 * spec.tol / max(pref, 1e-300))
    fp = sing + rem.value
    hom = _homogeneous_constant(spec, f, h)
    value = pref * (fp + hom)
    if not full_output:
        return value
    return IntegralResult(value, pref * rem.error, rem.intervals, fp, hom)


COUNTERTERMS = ("printed", "derived")


def _phi(m: int, eps: float) -> float:
    return math.log(eps) if m == 4 else eps ** (4.0 / m - 1.0) / (4.0 / m - 1.0)


def _phi_weight(m: int, kind: str) -> Fraction:
    """Coefficient of 2c * phi_m(eps) in the Case 1 counterterm."""
    if kind not in COUNTERTERMS:
        raise ValueError(f"counterterm kind must be one of {COUNTERTERMS}")
    if kind == "printed":
        return 3 - Fraction(2, m)
    return Fraction(4 - m, m * m)


def counterterm(spec: IntegralSpec, eps: float, kind: str = "derived") -> float:
    """Counterterm added to int_eps^z f(w) dw before eps -> 0."""
    m = spec.m
    weight = _phi_weight(m, kind)
    if spec.family is FamilyId.CASE2:
        return eps ** (4.0 / m - 1.0)
    return eps ** (4.0 / m - 3.0) + 2.0 * spec.c * float(weight) * _phi(m, eps)


def regularized_bracket(spec: IntegralSpec, eps: float, counterterms: str = "derived") -> float:
    """int_eps^z f(w) dw + counterterm(eps).

    The large powers of eps cancel between the integral and the counterterm.
    Their coefficients are combined in exact arithmetic first, so no float
    cancellation takes place.
    """
    if not 0.0 < eps < min(spec.z, _DELTA):
        raise ValueError("eps must lie in (0, min(z, 0.02))")
    m = spec.m
    f = _integrand(spec)
    K = _subtraction_order(f)
    h = f.h(_TAIL_TERMS)
    z = spec.z
    weight = _phi_weight(m, counterterms)
    kept = [h[k] * _finite_part_power(f.alpha + 2 * k + 1, z) for k in range(K)]
    # eps-side pieces: -h_k FP(eps) for every subtracted k, plus the counterterm
    p0 = Fraction(4, m) - (3 if spec.family is FamilyId.CASE1 else 1)
    h0 = Fraction(4 - 3 * m if spec.family is FamilyId.CASE1 else 4 - m, m)
    if p0 == 0:
        eps_side = [float(-h0) * math.log(eps) + 1.0]
    else:
        eps_side = [float(1 - h0 / p0) * eps ** float(p0)]
    first = 1
    if spec.family is FamilyId.CASE1:
        # h_1 = 2c(4 - m)/m^2 meets the 2c * weight * phi_m(eps) counterterm
        eps_side.append(2.0 * spec.c * float(weight - Fraction(4 - m, m * m)) * _phi(m, eps))
        first = 2
    for k in range(first, K):
        eps_side.append(-h[k] * _finite_part_power(f.alpha + 2 * k + 1, eps))
    rem_0z = _remainder_integral(f, h, K, z, 1e-3 * spec.tol).value
    rem_0eps = _tail(f, h, K, eps)
    return math.fsum(kept + eps_side + [rem_0z, -rem_0eps])


# series oracle


@lru_cache(maxsize=512)
def _scalar_table(family: FamilyId, m: int, c: Fraction, N: int) -> tuple[Fraction, ...]:
    """Generating-series coefficients evaluated exactly at a rational c."""
    vals = [Fraction(v) for v in family.initial][: N + 1]
    for k in range(4, N + 1):
        j = k - 4
        vals.append((2 * c * ((j - 1) * m + 2) * vals[k - 2] - (j - 3) * m * vals[k - 4]) / (j * m + m + 4))
    return tuple(vals)


_N_CAP = 4000


def series_value(family, m: int, c: float, z: float, N: int | None = None, tol: float = 1e-15) -> float:
    """Truncated generating series at (c, z), the exact table evaluated at Fraction(c).

    With N omitted the order is chosen so that the tail bound
    |z|^(N+1)/(1-|z|) * B stays below tol, B = 2 * max|coefficient| seen so far.
    """
    fam = FamilyId.parse(family)
    cq = Fraction(c)
    if N is not None:
        vals = _scalar_table(fam, m, cq, N)
        return math.fsum(float(v) * z ** k for k, v in enumerate(vals))
    az = abs(z)
    if az >= 1:
        raise ValueError("series diverges for |z| >= 1")
    n = 32
    while True:
        vals = _scalar_table(fam, m, cq, n)
        bound = 2 * max(abs(float(v)) for v in vals) * az ** (n + 1) / (1 - az)
        if bound < tol:
            return math.fsum(float(v) * z ** k for k, v in enumerate(vals))
        n *= 2
        if n > _N_CAP:
            raise ValueError("series tail bound not achievable")


DEFAULT_C = tuple(round(-0.9 + 0.3 * i, 10) for i in range(7))
DEFAULT_Z = tuple(round(0.1 * i, 10) for i in range(1, 6))


def default_grid() -> list[tuple[float, float]]:
    return [(c, z) for c in DEFAULT_C for z in DEFAULT_Z]


CSV_COLUMNS = ("family", "m", "c", "z", "series", "integral", "abs_diff")


def compare_grid(family, m: int, grid=None, tol: float = 1e-10) -> list[dict]:
    """|integral_value - series_value| at each grid point, as CSV-ready rows."""
    fam = FamilyId.parse(family)
    rows = []
    for c, z in grid if grid is not None else default_grid():
        spec = IntegralSpec(fam, m, c, z, tol)
        s = series_value(fam, m, c, z)
        v = integral_value(spec)
        rows.append({"family": fam.value, "m": m, "c": c, "z": z, "series": s, "integral": v, "abs_diff": abs(s - v)})
    return rows


def max_deviation(rows: list[dict]) -> float:
    return max((r["abs_diff"] for r in rows), default=0.0)
