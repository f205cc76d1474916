"""Formal power series in the dummy variables z_k, z_n.

A FormalSeries is a finitely supported map Multiindex -> Coefficient, where a
coefficient is an exact sympy polynomial over opaque symbols. An optional
cutoff records up to which order |beta|_< the series is faithful.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from src.multiindex import (Multiindex, StructureParams, bracket, is_populated,
                            order_value, parabolic_degree)

logger = logging.getLogger(__name__)


def make_coefficient(value) -> sp.Expr:
    """Exact sympy coefficient in expanded normal form."""
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    return sp.expand(sp.sympify(value))


def coeff_is_zero(value) -> bool:
    return sp.expand(value) == 0


def _min_cutoff(*cutoffs: Optional[Fraction]) -> Optional[Fraction]:
    present = [c for c in cutoffs if c is not None]
    return min(present) if present else None


class FormalSeries:
    """Sparse series sum_beta c_beta z^beta with exact coefficients."""

    __slots__ = ('params', 'terms', 'cutoff')

    def __init__(self, params: StructureParams, terms: Optional[Mapping[Multiindex, object]] = None,
                 cutoff: Optional[Fraction] = None):
        self.params = params
        self.cutoff = None if cutoff is None else Fraction(cutoff)
        clean: Dict[Multiindex, sp.Expr] = {}
        for beta, value in (terms or {}).items():
            coeff = make_coefficient(value)
            if coeff == 0:
                continue
            if self.cutoff is not None and order_value(beta, params) > self.cutoff:
                continue
            clean[beta] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, params: StructureParams, cutoff: Optional[Fraction] = None) -> 'FormalSeries':
        return cls(params, {}, cutoff)

    @classmethod
    def one(cls, params: StructureParams, cutoff: Optional[Fraction] = None) -> 'FormalSeries':
        return cls(params, {Multiindex.empty(): 1}, cutoff)

    @classmethod
    def monomial(cls, params: StructureParams, beta: Multiindex, coeff=1,
                 cutoff: Optional[Fraction] = None) -> 'FormalSeries':
        return cls(params, {beta: coeff}, cutoff)

    # -- access -------------------------------------------------------------

    def coefficient(self, beta: Multiindex) -> sp.Expr:
        return self.terms.get(beta, sp.Integer(0))

    def support(self) -> List[Multiindex]:
        return sorted(self.terms, key=lambda b: (order_value(b, self.params), b.sort_key()))

    def items(self) -> Iterator[Tuple[Multiindex, sp.Expr]]:
        for beta in self.support():
            yield beta, self.terms[beta]

    def __len__(self):
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def free_symbols(self) -> set:
        out = set()
        for coeff in self.terms.values():
            out |= coeff.free_symbols
        return out

    def is_supported_on(self, predicate: Callable[[Multiindex], bool]) -> bool:
        return all(predicate(beta) for beta in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: 'FormalSeries') -> 'FormalSeries':
        return series_add(self, other)

    def __sub__(self, other: 'FormalSeries') -> 'FormalSeries':
        return series_add(self, other.scale(-1))

    def __neg__(self) -> 'FormalSeries':
        return self.scale(-1)

    def __mul__(self, other: 'FormalSeries') -> 'FormalSeries':
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return series_mul(self, other)

    def scale(self, factor) -> 'FormalSeries':
        factor = make_coefficient(factor)
        return FormalSeries(self.params, {b: c * factor for b, c in self.terms.items()}, self.cutoff)

    def truncate(self, cutoff: Optional[Fraction]) -> 'FormalSeries':
        return FormalSeries(self.params, self.terms, _min_cutoff(self.cutoff, cutoff))

    def subs(self, mapping: Mapping) -> 'FormalSeries':
        return FormalSeries(self.params, {b: c.subs(mapping) for b, c in self.terms.items()}, self.cutoff)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        if self.params != other.params:
            return False
        for beta in set(self.terms) | set(other.terms):
            if not coeff_is_zero(self.coefficient(beta) - other.coefficient(beta)):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*z^[{b}]" for b, c in self.items()) or "0"
        return f"FormalSeries({body}, cutoff={self.cutoff})"


def series_add(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    out = dict(a.terms)
    for beta, coeff in b.terms.items():
        out[beta] = out.get(beta, 0) + coeff
    return FormalSeries(a.params, out, _min_cutoff(a.cutoff, b.cutoff))


def series_mul(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    """Cauchy product, truncated at the smaller cutoff.

    Operands are never pruned before multiplying: a polynomial unit e_0 lowers
    the order, so a term above the cutoff can still feed one below it.
    """
    cutoff = _min_cutoff(a.cutoff, b.cutoff)
    params = a.params
    out: Dict[Multiindex, object] = {}
    for b1, c1 in a.terms.items():
        for b2, c2 in b.terms.items():
            beta = b1 + b2
            if cutoff is not None and order_value(beta, params) > cutoff:
                continue
            out[beta] = out.get(beta, 0) + c1 * c2
    return FormalSeries(params, out, cutoff)


def series_power(a: FormalSeries, exponent: int) -> FormalSeries:
    result = FormalSeries.one(a.params, a.cutoff)
    for _ in range(exponent):
        result = series_mul(result, a)
    return result


def series_derivative(a: FormalSeries, n: Sequence[int]) -> FormalSeries:
    """(D^n a)_beta = (beta(n) + 1) a_{beta + e_n}.

    The cutoff drops by |e_n|_< - |0|_< = |n| - alpha - D/2, so the derivative is
    faithful exactly where a was.
    """
    n = tuple(n)
    params = a.params
    unit = Multiindex.unit_n(n)
    out = {}
    for gamma, coeff in a.terms.items():
        mult = gamma.n_mult(n)
        if mult == 0:
            continue
        out[gamma - unit] = coeff * mult
    cutoff = None
    if a.cutoff is not None:
        cutoff = a.cutoff - parabolic_degree(n) + params.alpha + params.half_D
    return FormalSeries(params, out, cutoff)


def project_T(a: FormalSeries) -> FormalSeries:
    """Keep only populated multiindices."""
    return FormalSeries(a.params, {b: c for b, c in a.terms.items() if is_populated(b, a.params)}, a.cutoff)


def project_Ttilde(a: FormalSeries) -> FormalSeries:
    """Keep only multiindices with [beta] >= 0."""
    return FormalSeries(a.params, {b: c for b, c in a.terms.items() if bracket(b) >= 0}, a.cutoff)
