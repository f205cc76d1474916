"""Shared fixtures for the mirs test suites."""

from fractions import Fraction

from src.multiindex import Multiindex, StructureParams


def default_params(**overrides) -> StructureParams:
    """d=3, kmin=3, alpha=-11/20, kappa=1/100 unless overridden."""
    values = dict(d=3, kmin=3, alpha=Fraction(-11, 20), kappa=Fraction(1, 100))
    values.update(overrides)
    return StructureParams(**values)


def e(*n, mult=1) -> Multiindex:
    """Polynomial unit e_n; e() is e_0 for d = 3."""
    return Multiindex.unit_n(n or (0, 0, 0, 0), mult)


def f(k, mult=1) -> Multiindex:
    return Multiindex.unit_k(k, mult)


E0 = (0, 0, 0, 0)
EMPTY = Multiindex.empty()
