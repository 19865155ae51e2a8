"""Exact and numerical tools for superelliptic current algebras and the
orthogonal polynomial families of the quartic curve u^m = 1 - 2ct^2 + t^4."""

from .exactnum import Poly, TruncatedSeries, binomial_series
from .curvering import CurveRing, OmegaElement, RingElement
from .families import FamilyId, FamilyTable, build_family, gegenbauer

__all__ = [
    "Poly",
    "TruncatedSeries",
    "binomial_series",
    "CurveRing",
    "OmegaElement",
    "RingElement",
    "FamilyId",
    "FamilyTable",
    "build_family",
    "gegenbauer",
]

__version__ = "0.1.0"
