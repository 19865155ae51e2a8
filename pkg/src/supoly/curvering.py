"""The ring C[t, 1/t, u | u^m = P(t)] and reduction of differentials modulo dR.

A class ``t^n u^l dt`` is reduced to the basis ``t^-1 dt`` and ``t^-k u^l dt``
(``1 <= k <= D``, ``1 <= l <= m-1``; ``k = D`` omitted when ``a_0 = 0``) using
the exactness relation

    d(t^a u^l P(t)) = sum_k a_k (m a + (l + m) k) t^(a+k-1) u^l dt / m  =  0.

Solving it for the top index gives the upward recursion (n >= 0); solving for
the bottom index gives the downward one (``a_0 != 0``: divide by ``a_0``;
``a_0 = 0``: divide by ``a_1``).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import ONE, ZERO, Poly, as_fraction, as_poly

OMEGA0 = (-1, 0)


class OmegaElement:
    """A class in Omega^1_R / dR expanded over the Kahler basis.

    Keys are ``(n, l)`` standing for ``t^n u^l dt``; ``(-1, 0)`` is ``w0``.
    Values are :class:`Poly` coefficients in ``c``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for key, val in (terms or {}).items():
            p = as_poly(val)
            if not p.is_zero():
                clean[tuple(key)] = p
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=_omega_order)))

    def __setattr__(self, name, value):
        raise AttributeError("OmegaElement is immutable")

    @classmethod
    def basis(cls, n: int, l: int) -> "OmegaElement":
        return cls({(n, l): ONE})

    def __add__(self, other: "OmegaElement") -> "OmegaElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return OmegaElement(out)

    def __neg__(self) -> "OmegaElement":
        return OmegaElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "OmegaElement") -> "OmegaElement":
        return self + (-other)

    def __mul__(self, s) -> "OmegaElement":
        s = as_poly(s)
        return OmegaElement({k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, n: int, l: int) -> Poly:
        return self.terms.get((n, l), ZERO)

    def __eq__(self, other) -> bool:
        return isinstance(other, OmegaElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"OmegaElement({self})"

    def __str__(self) -> str:
        return format_linear(
            (("w0" if key == OMEGA0 else f"w[{key[0]},{key[1]}]"), coef)
            for key, coef in self.terms.items()
        )

    def as_pairs(self) -> list[tuple[str, str]]:
        return [
            ("w0" if key == OMEGA0 else f"w[{key[0]},{key[1]}]", str(coef))
            for key, coef in self.terms.items()
        ]


def _omega_order(item):
    (n, l), _ = item
    return (l, n)


def format_linear(pairs: Iterable[tuple[str, Poly]]) -> str:
    """Render ``sum coef*label`` as ``"9/7*w[-4,1] - 2/7*c*w[-2,1]"``."""
    out = ""
    for label, coef in pairs:
        if coef.is_zero():
            continue
        if coef.is_monomial():
            lead = coef.leading()
            neg = lead < 0
            mag = -coef if neg else coef
            body = label if mag == ONE else f"{mag}*{label}"
        else:
            neg = False
            body = f"({coef})*{label}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


class RingElement:
    """Finitely supported sum of ``coef * t^i u^l`` with ``0 <= l < m``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for key, val in (terms or {}).items():
            p = as_poly(val)
            if not p.is_zero():
                clean[tuple(key)] = p
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    @classmethod
    def monomial(cls, i: int, l: int = 0, coef=1) -> "RingElement":
        return cls({(i, l): coef})

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return RingElement(out)

    def __neg__(self) -> "RingElement":
        return RingElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, s) -> "RingElement":
        s = as_poly(s)
        return RingElement({k: v * s for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"RingElement({self})"

    def __str__(self) -> str:
        return format_linear((_monomial_label(i, l), coef) for (i, l), coef in self.terms.items())


def _monomial_label(i: int, l: int) -> str:
    parts = []
    if i:
        parts.append("t" if i == 1 else f"t^{i}")
    if l:
        parts.append("u" if l == 1 else f"u^{l}")
    return "*".join(parts) or "1"


class CurveRing:
    """Superelliptic ring defined by ``u^m = a_0 + a_1 t + ... + a_D t^D``.

    Coefficients may be rationals or :class:`Poly` in ``c``. The reductions
    divide by ``a_0`` (or ``a_1`` when ``a_0 = 0``), so that coefficient must
    be a nonzero constant.
    """

    def __init__(self, m: int, a: Sequence):
        if int(m) != m or m < 2:
            raise ValueError("m must be an integer >= 2")
        self.m = int(m)
        self.a = tuple(as_poly(x) for x in a)
        self.D = len(self.a) - 1
        if self.D < 1:
            raise ValueError("P(t) must have degree >= 1")
        if self.a[-1] != ONE:
            raise ValueError("leading coefficient a_D must be 1")
        if self.a[0].is_zero() and self.a[1].is_zero():
            raise ValueError("a_0 and a_1 must not both vanish")
        pivot = self.a[0] if not self.a[0].is_zero() else self.a[1]
        if not pivot.is_constant():
            raise ValueError("the lowest nonzero of a_0, a_1 must be a constant")
        if not self._squarefree():
            raise ValueError("P(t) has a multiple root")
        self._lock = threading.Lock()
        self._up: dict[int, list[OmegaElement]] = {}
        self._down: dict[int, list[OmegaElement]] = {}

    @classmethod
    def quartic(cls, m: int) -> "CurveRing":
        """``u^m = 1 - 2 c t^2 + t^4``."""
        return cls(m, (1, 0, Poly((0, -2)), 0, 1))

    def __repr__(self) -> str:
        return f"CurveRing(m={self.m}, a={[str(x) for x in self.a]})"

    @property
    def a0_zero(self) -> bool:
        return self.a[0].is_zero()

    def _squarefree(self) -> bool:
        # Coefficients in c are specialised at sample points: squarefree at one
        # point implies squarefree for generic c.
        samples = [Fraction(0)] if all(x.is_constant() for x in self.a) else [
            Fraction(1, 3), Fraction(2, 7), Fraction(-5, 11)
        ]
        for c0 in samples:
            p = Poly([x(c0) for x in self.a])
            if p.degree == self.D and p.gcd(p.deriv()).degree == 0:
                return True
        return False

    def P(self) -> RingElement:
        return RingElement({(k, 0): ak for k, ak in enumerate(self.a)})

    # Kahler basis
    def basis(self) -> list[tuple[int, int]]:
        low = -self.D + 1 if self.a0_zero else -self.D
        keys = [OMEGA0]
        for l in range(1, self.m):
            keys += [(n, l) for n in range(low, 0)]
        return keys

    def basis_size(self) -> int:
        return len(self.basis())

    def is_basis(self, n: int, l: int) -> bool:
        if l == 0:
            return n == -1
        low = -self.D + 1 if self.a0_zero else -self.D
        return 1 <= l < self.m and low <= n <= -1

    # ring structure
    def normalize(self, f: RingElement) -> RingElement:
        """Rewrite ``u^L`` with ``L >= m`` as ``P(t) u^(L-m)`` until reduced."""
        out: dict = {}
        stack = list(f.terms.items())
        while stack:
            (i, l), coef = stack.pop()
            if l < 0:
                raise ValueError("negative power of u")
            if l < self.m:
                out[(i, l)] = out.get((i, l), ZERO) + coef
                continue
            for k, ak in enumerate(self.a):
                if not ak.is_zero():
                    stack.append(((i + k, l - self.m), coef * ak))
        return RingElement(out)

    def mul(self, f: RingElement, g: RingElement) -> RingElement:
        raw: dict = {}
        for (i1, l1), c1 in f.terms.items():
            for (i2, l2), c2 in g.terms.items():
                key = (i1 + i2, l1 + l2)
                raw[key] = raw.get(key, ZERO) + c1 * c2
        return self.normalize(RingElement(raw))

    # reduction of differentials
    def reduce_form(self, n: int, l: int) -> OmegaElement:
        """Class of ``t^n u^l dt`` in Omega^1_R / dR."""
        if not 0 <= l < self.m:
            raise ValueError(f"u-exponent {l} outside 0..{self.m - 1}")
        if l == 0:
            # t^n dt = d(t^(n+1)/(n+1)) unless n = -1
            return OmegaElement.basis(-1, 0) if n == -1 else OmegaElement()
        if self.is_basis(n, l):
            return OmegaElement.basis(n, l)
        if n >= 0:
            return self._upward(n, l)
        return self._downward(n, l)

    def _value(self, n: int, l: int) -> OmegaElement:
        if self.is_basis(n, l):
            return OmegaElement.basis(n, l)
        if n >= 0:
            return self._up[l][n]
        return self._down[l][self._down_index(n)]

    def _down_index(self, n: int) -> int:
        top = -self.D if self.a0_zero else -self.D - 1
        return top - n

    def _upward(self, n: int, l: int) -> OmegaElement:
        m, D, a = self.m, self.D, self.a
        with self._lock:
            table = self._up.setdefault(l, [])
            while len(table) <= n:
                k_top = len(table)
                # exactness relation with exponent shift a = k_top - D + 1
                denom = D * l + (1 + k_top) * m
                if denom == 0:
                    raise ArithmeticError(f"vanishing divisor at n={k_top}, l={l}")
                acc = OmegaElement()
                for k in range(D):
                    if a[k].is_zero():
                        continue
                    mult = -(k * l + (-D + 1 + k_top + k) * m)
                    acc = acc + self._value(-D + k_top + k, l) * (a[k] * mult)
                table.append(acc * Fraction(1, denom))
            return table[n]

    def _downward(self, n: int, l: int) -> OmegaElement:
        m, D, a = self.m, self.D, self.a
        with self._lock:
            table = self._down.setdefault(l, [])
            while len(table) <= self._down_index(n):
                idx = (-self.D if self.a0_zero else -self.D - 1) - len(table)
                acc = OmegaElement()
                if not self.a0_zero:
                    # bottom term k = 0 of the relation with shift a = idx + 1
                    denom = a[0].constant() * m * (idx + 1)
                    for k in range(1, D + 1):
                        if a[k].is_zero():
                            continue
                        mult = -(k * l + (idx + 1 + k) * m)
                        acc = acc + self._value(idx + k, l) * (a[k] * mult)
                else:
                    # bottom term k = 1 of the relation with shift a = idx
                    denom = a[1].constant() * (l + (idx + 1) * m)
                    for k in range(2, D + 1):
                        if a[k].is_zero():
                            continue
                        mult = -(k * l + (idx + k) * m)
                        acc = acc + self._value(idx + k - 1, l) * (a[k] * mult)
                if denom == 0:
                    raise ArithmeticError(f"vanishing divisor at n={idx}, l={l}")
                table.append(acc * (Fraction(1) / denom))
            return table[self._down_index(n)]

    def reduce_ring_form(self, f: RingElement) -> OmegaElement:
        """Class of ``f dt`` for a ring element ``f`` (u-overflow rewritten first)."""
        acc = OmegaElement()
        for (i, l), coef in self.normalize(f).terms.items():
            acc = acc + self.reduce_form(i, l) * coef
        return acc

    def reduce_diff(self, f: RingElement, g: RingElement) -> OmegaElement:
        """Class of ``f dg`` in Omega^1_R / dR.

        For monomials ``t^i u^p`` and ``t^j u^q`` with ``p + q > 0`` this is
        ``(j p - i q)/(p + q)`` times the class of ``t^(i+j-1) u^(p+q) dt``,
        using ``t^(i+j) d(u^L) = -(i+j) t^(i+j-1) u^L dt`` modulo exact forms.
        """
        acc = OmegaElement()
        for (i, p), cf in f.terms.items():
            for (j, q), cg in g.terms.items():
                L = p + q
                if L == 0:
                    coef = Fraction(j)
                else:
                    coef = Fraction(j * p - i * q, L)
                if coef == 0:
                    continue
                form = self.reduce_ring_form(RingElement.monomial(i + j - 1, L))
                acc = acc + form * (cf * cg * coef)
        return acc

    def psi(self, i: int, j: int, l: int) -> OmegaElement:
        """Class of ``t^i u^l d(t^j)``, i.e. ``j * [t^(i+j-1) u^l dt]``."""
        if j == 0:
            return OmegaElement()
        return self.reduce_form(i + j - 1, l) * j

    def exactness_relation(self, shift: int, l: int) -> OmegaElement:
        """Class of ``m * d(t^shift u^l P(t)) / dt``-form; must reduce to zero."""
        acc = OmegaElement()
        for k, ak in enumerate(self.a):
            if ak.is_zero():
                continue
            mult = self.m * shift + (l + self.m) * k
            acc = acc + self.reduce_form(shift + k - 1, l) * (ak * mult)
        return acc

    def lemma_relation(self, i: int, sign: int = 1) -> OmegaElement:
        """Residual ``lhs - sign * rhs`` of the ``u^1`` relation with shift ``i``.

        ``lhs = ((m+1) D + i m) [t^(D+i-1) u dt]`` and
        ``rhs = sum_{j<D} ((m+1) j + m i) a_j [t^(i+j-1) u dt]``.
        Only ``sign = -1`` is an identity.
        """
        m, D = self.m, self.D
        lhs = self.reduce_form(D + i - 1, 1) * ((m + 1) * D + i * m)
        rhs = OmegaElement()
        for j in range(D):
            if self.a[j].is_zero():
                continue
            rhs = rhs + self.reduce_form(i + j - 1, 1) * (self.a[j] * ((m + 1) * j + m * i))
        return lhs - rhs * sign
