"""Universal central extension (g (x) R) + Omega^1_R/dR of a superelliptic current algebra."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .curvering import CurveRing, OmegaElement, RingElement, format_linear
from .exactnum import ONE, ZERO, Poly, as_fraction, as_poly


class FinLieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants and an invariant form.

    ``structure[(a, b)]`` maps ``e -> coefficient`` of ``[x_a, x_b]``; missing
    pairs bracket to zero. Antisymmetry, the Jacobi identity and invariance
    of ``form`` are checked on construction.
    """

    def __init__(self, names: Sequence[str], structure: Mapping, form: Sequence[Sequence]):
        self.names = tuple(names)
        self.dim = len(self.names)
        d = self.dim
        self.const = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for (a, b), out in structure.items():
            for e, v in out.items():
                self.const[a][b][e] = as_fraction(v)
        self.form = [[as_fraction(x) for x in row] for row in form]
        self._validate()

    def _validate(self) -> None:
        d = self.dim
        for a, b, e in itertools.product(range(d), repeat=3):
            if self.const[a][b][e] != -self.const[b][a][e]:
                raise ValueError("structure constants are not antisymmetric")
        for a, b in itertools.product(range(d), repeat=2):
            if self.form[a][b] != self.form[b][a]:
                raise ValueError("form is not symmetric")
        for x, y, z in itertools.product(range(d), repeat=3):
            jac = _vadd(
                _vadd(self.bracket_vec(self.basis_vec(x), self.bracket_vec(self.basis_vec(y), self.basis_vec(z))),
                      self.bracket_vec(self.basis_vec(y), self.bracket_vec(self.basis_vec(z), self.basis_vec(x)))),
                self.bracket_vec(self.basis_vec(z), self.bracket_vec(self.basis_vec(x), self.basis_vec(y))),
            )
            if any(jac):
                raise ValueError("structure constants violate the Jacobi identity")
            lhs = self.pair(self.bracket_vec(self.basis_vec(x), self.basis_vec(y)), self.basis_vec(z))
            rhs = self.pair(self.basis_vec(x), self.bracket_vec(self.basis_vec(y), self.basis_vec(z)))
            if lhs != rhs:
                raise ValueError("form is not invariant")

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis_vec(self, a: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[a] = Fraction(1)
        return v

    def bracket_vec(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for e in range(self.dim):
                    c = self.const[a][b][e]
                    if c:
                        out[e] += xa * yb * c
        return out

    def pair(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return sum((x[a] * y[b] * self.form[a][b] for a in range(self.dim) for b in range(self.dim)),
                   Fraction(0))

    def __repr__(self) -> str:
        return f"FinLieAlgebra({', '.join(self.names)})"


def _vadd(x, y):
    return [a + b for a, b in zip(x, y)]


def sl2() -> FinLieAlgebra:
    """sl(2) in the basis (e, h, f) with its Killing form."""
    e, h, f = 0, 1, 2
    structure = {
        (h, e): {e: 2}, (e, h): {e: -2},
        (h, f): {f: -2}, (f, h): {f: 2},
        (e, f): {h: 1}, (f, e): {h: -1},
    }
    form = [[0, 0, 4], [0, 8, 0], [4, 0, 0]]
    return FinLieAlgebra(("e", "h", "f"), structure, form)


class ExtendedElement:
    """Element of (g (x) R) + C: loop terms ``(a, i, l) -> coef`` plus a central class."""

    __slots__ = ("loop", "central")

    def __init__(self, loop: Mapping | None = None, central: OmegaElement | None = None):
        clean = {}
        for key, val in (loop or {}).items():
            p = as_poly(val)
            if not p.is_zero():
                clean[tuple(key)] = p
        object.__setattr__(self, "loop", dict(sorted(clean.items())))
        object.__setattr__(self, "central", central if central is not None else OmegaElement())

    def __setattr__(self, name, value):
        raise AttributeError("ExtendedElement is immutable")

    @classmethod
    def loop_monomial(cls, a: int, i: int, l: int, coef=1) -> "ExtendedElement":
        return cls({(a, i, l): coef})

    @classmethod
    def central_element(cls, w: OmegaElement) -> "ExtendedElement":
        return cls(None, w)

    def __add__(self, other: "ExtendedElement") -> "ExtendedElement":
        out = dict(self.loop)
        for k, v in other.loop.items():
            out[k] = out.get(k, ZERO) + v
        return ExtendedElement(out, self.central + other.central)

    def __neg__(self) -> "ExtendedElement":
        return ExtendedElement({k: -v for k, v in self.loop.items()}, -self.central)

    def __sub__(self, other: "ExtendedElement") -> "ExtendedElement":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.loop and self.central.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtendedElement) and self.loop == other.loop and self.central == other.central

    def __hash__(self) -> int:
        return hash((tuple(self.loop.items()), self.central))

    def format(self, g: FinLieAlgebra) -> str:
        pairs = []
        for (a, i, l), coef in self.loop.items():
            mono = "*".join(p for p in (("t" if i == 1 else f"t^{i}") if i else "",
                                          ("u" if l == 1 else f"u^{l}") if l else "") if p)
            pairs.append((g.names[a] + ("*" + mono if mono else ""), coef))
        for key, coef in self.central.terms.items():
            pairs.append(("w0" if key == (-1, 0) else f"w[{key[0]},{key[1]}]", coef))
        return format_linear(pairs)

    def __repr__(self) -> str:
        return f"ExtendedElement(loop={self.loop}, central={self.central})"


def bracket(x: ExtendedElement, y: ExtendedElement, ring: CurveRing, g: FinLieAlgebra) -> ExtendedElement:
    """``[x (x) f, y (x) g] = [x, y] (x) fg + (x, y) [f dg]``; central parts bracket to zero."""
    loop: dict = {}
    central = OmegaElement()
    for (a, i, l1), cx in x.loop.items():
        if a >= g.dim or l1 >= ring.m:
            raise ValueError("element does not belong to this ring/algebra")
        for (b, j, l2), cy in y.loop.items():
            if b >= g.dim or l2 >= ring.m:
                raise ValueError("element does not belong to this ring/algebra")
            coef = cx * cy
            f = RingElement.monomial(i, l1)
            h = RingElement.monomial(j, l2)
            br = g.const[a][b]
            if any(br):
                prod = ring.mul(f, h)
                for e, s in enumerate(br):
                    if not s:
                        continue
                    for (k, l), pc in prod.terms.items():
                        key = (e, k, l)
                        loop[key] = loop.get(key, ZERO) + coef * pc * s
            kappa = g.form[a][b]
            if kappa:
                central = central + ring.reduce_diff(f, h) * (coef * kappa)
    return ExtendedElement(loop, central)


def jacobi_defect(x, y, z, ring: CurveRing, g: FinLieAlgebra) -> ExtendedElement:
    def br(p, q):
        return bracket(p, q, ring, g)
    return br(br(x, y), z) + br(br(y, z), x) + br(br(z, x), y)


def sample_triples(g: FinLieAlgebra, count: int = 200, i_range=(-3, 3), l_range=(0, 2),
                   seed: int = 20240531) -> list[tuple[ExtendedElement, ExtendedElement, ExtendedElement]]:
    """Deterministic sample of monomial triples ``x_a (x) t^i u^l``."""
    rng = random.Random(seed)

    def pick():
        return ExtendedElement.loop_monomial(
            rng.randrange(g.dim), rng.randint(*i_range), rng.randint(*l_range)
        )

    return [(pick(), pick(), pick()) for _ in range(count)]


def check_jacobi(ring: CurveRing, g: FinLieAlgebra, sample) -> int:
    """Number of sampled triples with nonzero Jacobi defect (zero certifies the cocycle)."""
    return sum(1 for x, y, z in sample if not jacobi_defect(x, y, z, ring, g).is_zero())


def check_antisymmetry(ring: CurveRing, g: FinLieAlgebra, elements) -> int:
    bad = 0
    for x, y in itertools.product(elements, repeat=2):
        if not (bracket(x, y, ring, g) + bracket(y, x, ring, g)).is_zero():
            bad += 1
    return bad


MODULE_TENSOR_NOTE = (
    "module sector [x(x)t^i u^n, y(x)t^j]: printed tensor part [x,y](x)t^(i+j)u^(n+1), "
    "cocycle gives [x,y](x)t^(i+j)u^n; central part j*psi_(i,j) agrees"
)


@dataclass
class Theorem35Report:
    checked: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def sector_mismatches(self, sector: str) -> list:
        return [mm for mm in self.mismatches if mm["sector"] == sector]

    @property
    def ok(self) -> bool:
        """True when every mismatch is the documented module-sector tensor exponent."""
        return all(mm["sector"] == "module" and mm["part"] == "tensor" for mm in self.mismatches)


def _closed_form(ring: CurveRing, g: FinLieAlgebra, a: int, i: int, l1: int, b: int, j: int, l2: int,
                 sector: str) -> ExtendedElement:
    m = ring.m
    loop: dict = {}
    central = OmegaElement()
    br = g.const[a][b]
    kappa = g.form[a][b]
    L = l1 + l2
    if sector == "affine":
        tensor = {(i + j, 0): ONE}
        if i + j == 0 and kappa:
            central = OmegaElement.basis(-1, 0) * (kappa * j)
    elif sector == "module":
        tensor = {(i + j, l1 + 1): ONE}
        central = ring.psi(i, j, l1) * kappa
    elif sector == "graded":
        tensor = {(i + j, L): ONE}
        central = ring.reduce_form(i + j - 1, L) * (kappa * Fraction(j * l1 - i * l2, L))
    else:  # overflow, L > m - 1
        tensor = {(i + j + k, L - m): ak for k, ak in enumerate(ring.a) if not ak.is_zero()}
        # w_(i+j-1, L) read as the class of t^(i+j-1) u^L dt with u^m = P(t)
        w = OmegaElement()
        for k, ak in enumerate(ring.a):
            if not ak.is_zero():
                w = w + ring.reduce_form(i + j - 1 + k, L - m) * ak
        central = w * (kappa * Fraction(j * l1 - i * l2, L))
    for e, s in enumerate(br):
        if s:
            for (k, l), pc in tensor.items():
                loop[(e, k, l)] = loop.get((e, k, l), ZERO) + pc * s
    return ExtendedElement(loop, central)


def verify_theorem35(ring: CurveRing, g: FinLieAlgebra, i_range=(-3, 3), j_range=(-3, 3),
                     l1_range=None, l2_range=None) -> Theorem35Report:
    """Compare :func:`bracket` with the closed-form commutation relations sector by sector."""
    m = ring.m
    l1s = range(l1_range[0], l1_range[1] + 1) if l1_range else range(m)
    l2s = range(l2_range[0], l2_range[1] + 1) if l2_range else range(m)
    report = Theorem35Report()
    for a, b in itertools.product(range(g.dim), repeat=2):
        for i in range(i_range[0], i_range[1] + 1):
            for j in range(j_range[0], j_range[1] + 1):
                for l1 in l1s:
                    for l2 in l2s:
                        x = ExtendedElement.loop_monomial(a, i, l1)
                        y = ExtendedElement.loop_monomial(b, j, l2)
                        got = bracket(x, y, ring, g)
                        L = l1 + l2
                        sectors = []
                        if L == 0:
                            sectors.append("affine")
                        elif L <= m - 1:
                            sectors.append("graded")
                        else:
                            sectors.append("overflow")
                        if l2 == 0 and l1 >= 1:
                            sectors.append("module")
                        for sector in sectors:
                            want = _closed_form(ring, g, a, i, l1, b, j, l2, sector)
                            report.checked[sector] = report.checked.get(sector, 0) + 1
                            if got.loop != want.loop:
                                report.mismatches.append(dict(
                                    sector=sector, part="tensor", x=g.names[a], y=g.names[b],
                                    i=i, j=j, l1=l1, l2=l2,
                                    got=got.format(g), closed_form=want.format(g)))
                            if got.central != want.central:
                                report.mismatches.append(dict(
                                    sector=sector, part="central", x=g.names[a], y=g.names[b],
                                    i=i, j=j, l1=l1, l2=l2,
                                    got=str(got.central), closed_form=str(want.central)))
    if report.sector_mismatches("module"):
        report.notes.append(MODULE_TENSOR_NOTE)
    return report
