"""Exact rational polynomials in ``c`` and truncated power series in ``z``.

Scalars are :class:`fractions.Fraction`; every object here is immutable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def fmt_fraction(q: Fraction) -> str:
    return str(q)


class Poly:
    """Dense univariate polynomial in ``c`` with rational coefficients.

    ``coeffs[k]`` is the coefficient of ``c**k``; trailing zeros are stripped so
    the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(a) for a in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors
    @classmethod
    def const(cls, a: Scalar) -> "Poly":
        return cls((a,))

    @classmethod
    def monomial(cls, k: int, a: Scalar = 1) -> "Poly":
        return cls([0] * k + [a])

    @classmethod
    def c(cls) -> "Poly":
        return cls((0, 1))

    # basic properties
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    # arithmetic
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(as_fraction(other))

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = as_fraction(other)
            if s == 0:
                return Poly()
            return Poly([x * s for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("only division by nonzero constants is exact here")
            other = other.constant()
        s = as_fraction(other)
        if s == 0:
            raise ZeroDivisionError("division by zero")
        return Poly([x / s for x in self.coeffs])

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, s: Scalar) -> "Poly":
        return self * s

    def deriv(self, order: int = 1) -> "Poly":
        p = self
        for _ in range(order):
            p = Poly([k * a for k, a in enumerate(p.coeffs)][1:])
        return p

    def __call__(self, x):
        """Horner evaluation; exact for rational ``x``, float otherwise."""
        if isinstance(x, float):
            acc = 0.0
            for a in reversed(self.coeffs):
                acc = acc * x + float(a)
            return acc
        x = as_fraction(x)
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def reflect(self) -> "Poly":
        """p(-c)."""
        return Poly([a if k % 2 == 0 else -a for k, a in enumerate(self.coeffs)])

    def monic(self) -> "Poly":
        return self / self.leading()

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(len(r) - len(other.coeffs) + 1, 0)
        lead = other.leading()
        db = other.degree
        for k in range(len(r) - 1, db - 1, -1):
            coef = r[k] / lead
            if coef:
                q[k - db] = coef
                for j, b in enumerate(other.coeffs):
                    r[k - db + j] -= coef * b
        return Poly(q), Poly(r)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    # comparison / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly.const(as_fraction(other)).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return self.format("c")

    def format(self, var: str = "c") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = -a if a < 0 else a
            if k == 0:
                body = str(mag)
            else:
                mon = var if k == 1 else f"{var}^{k}"
                body = mon if mag == 1 else f"{mag}*{mon}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def is_monomial(self) -> bool:
        return sum(1 for a in self.coeffs if a != 0) == 1


C = Poly.c()
ONE = Poly.const(1)
ZERO = Poly()


def as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(as_fraction(x))


class TruncatedSeries:
    """Power series in ``z`` truncated at order ``N`` with :class:`Poly` coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence = ()):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [as_poly(a) for a in list(coeffs)[: order + 1]]
        cs += [ZERO] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(order)

    @classmethod
    def from_terms(cls, order: int, terms: dict) -> "TruncatedSeries":
        """Build from ``{power: coefficient}``; powers above ``order`` are dropped."""
        cs = [ZERO] * (order + 1)
        for k, a in terms.items():
            if k < 0:
                raise ValueError("negative power of z")
            if k <= order:
                cs[k] = cs[k] + as_poly(a)
        return cls(order, cs)

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected TruncatedSeries")
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} != {other.order}")

    def __getitem__(self, k: int) -> Poly:
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.order, [-a for a in self.coeffs])

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            p = as_poly(other)
            return TruncatedSeries(self.order, [a * p for a in self.coeffs])
        self._check(other)
        N = self.order
        out = [ZERO] * (N + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(N + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(N, out)

    __rmul__ = __mul__

    def zderiv(self) -> "TruncatedSeries":
        """d/dz; the top slot becomes zero since the next coefficient is unknown."""
        cs = [self.coeffs[k + 1] * (k + 1) for k in range(self.order)]
        return TruncatedSeries(self.order, cs)

    def zscale(self) -> "TruncatedSeries":
        """z d/dz: multiplies the z^k coefficient by k."""
        return TruncatedSeries(self.order, [a * k for k, a in enumerate(self.coeffs)])

    def cderiv(self, order: int = 1) -> "TruncatedSeries":
        return TruncatedSeries(self.order, [a.deriv(order) for a in self.coeffs])

    def map(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(self.order, [fn(k, a) for k, a in enumerate(self.coeffs)])

    def valuation(self) -> int:
        for k, a in enumerate(self.coeffs):
            if not a.is_zero():
                return k
        return self.order + 1

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"({a})*z^{k}" for k, a in enumerate(self.coeffs) if not a.is_zero()]
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries[{self.order}]({body})"


def binomial_series(s: TruncatedSeries, alpha) -> TruncatedSeries:
    """Truncated expansion of ``(1 + s)**alpha`` for ``s`` with zero constant term."""
    if not s.coeffs[0].is_zero():
        raise ValueError("binomial_series needs a series without constant term")
    alpha = as_fraction(alpha)
    N = s.order
    out = TruncatedSeries.from_terms(N, {0: 1})
    power = out
    binom = Fraction(1)
    v = s.valuation()
    for k in range(1, N + 1):
        if k * v > N:
            break
        binom = binom * (alpha - k + 1) / k
        power = power * s
        if binom:
            out = out + power * binom
    return out
