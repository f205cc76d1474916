"""Law-adapted Appell polynomials.

W_k(phi) = d^k/dtau^k e^{tau phi} / E[e^{tau Z}] at tau = 0, built from the
moments m_j = E[Z^j] through the reciprocal exponential series. Everything is
exact sympy arithmetic; evaluate() is the only float path.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from src.errors import ValidationError
from src.formal_series import FormalSeries, series_mul
from src.multiindex import Multiindex

logger = logging.getLogger(__name__)

PHI = sp.Symbol("phi")
PI0 = sp.Symbol("Pi0")


@lru_cache(maxsize=None)
def w_atom(j: int) -> sp.Expr:
    """The unexpanded atom W_j(Pi0); W_0 is 1."""
    if j == 0:
        return sp.Integer(1)
    return sp.Symbol(f"W{j}(Pi0)")


def _exact(value) -> sp.Expr:
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        raise ValidationError(f"moment {value!r} is a float; pass an exact rational")
    return sp.sympify(value)


@dataclass(frozen=True)
class MomentSequence:
    """m_0 = 1, m_1, ..., m_K."""
    m: Tuple[sp.Expr, ...]

    def __post_init__(self):
        values = tuple(_exact(v) for v in self.m)
        if not values or values[0] != 1:
            raise ValidationError("moment sequence must start with m_0 = 1")
        object.__setattr__(self, 'm', values)

    @property
    def K(self) -> int:
        return len(self.m) - 1

    def __getitem__(self, j: int) -> sp.Expr:
        return self.m[j]

    def is_symmetric(self) -> bool:
        return all(self.m[j] == 0 for j in range(1, self.K + 1, 2))


def gaussian_moments(sigma2, K: int) -> MomentSequence:
    """E[Z^j] for Z ~ N(0, sigma2): zero for odd j, (j-1)!! sigma2^{j/2} for even j."""
    sigma2 = _exact(sigma2)
    m = []
    for j in range(K + 1):
        if j % 2:
            m.append(sp.Integer(0))
        else:
            m.append(sp.factorial2(j - 1) * sigma2 ** (j // 2) if j else sp.Integer(1))
    return MomentSequence(tuple(m))


def rescale_moments(m: MomentSequence, alpha, eps) -> MomentSequence:
    """Moments of eps^alpha Z: m_j -> eps^{j alpha} m_j."""
    alpha = _exact(alpha)
    eps = _exact(eps)
    return MomentSequence(tuple(sp.simplify(eps ** (j * alpha) * m[j]) if j else m[j]
                                for j in range(m.K + 1)))


def reciprocal_mgf(m: MomentSequence, K: int) -> List[sp.Expr]:
    """r_0..r_K with sum r_i tau^i/i! = (sum m_i tau^i/i!)^{-1}.

    On exponential coefficients the inverse satisfies
    r_n = -sum_{i=1}^n binom(n, i) m_i r_{n-i}.
    """
    if K > m.K:
        raise ValidationError(f"need moments up to order {K}, got {m.K}")
    r = [sp.Integer(1)]
    for n in range(1, K + 1):
        r.append(sp.expand(-sum(sp.binomial(n, i) * m[i] * r[n - i] for i in range(1, n + 1))))
    return r


@dataclass(frozen=True)
class AppellPolynomial:
    """Coefficients a_0..a_k of sum a_j phi^j."""
    degree: int
    coefficients: Tuple[sp.Expr, ...]

    def coefficient(self, j: int) -> sp.Expr:
        return self.coefficients[j] if 0 <= j <= self.degree else sp.Integer(0)

    @property
    def is_monic(self) -> bool:
        return sp.simplify(self.coefficients[-1] - 1) == 0

    def to_sympy(self, var: sp.Expr = PHI) -> sp.Expr:
        return sp.Add(*(c * var ** j for j, c in enumerate(self.coefficients)))

    def derivative(self) -> 'AppellPolynomial':
        if self.degree == 0:
            return AppellPolynomial(0, (sp.Integer(0),))
        return AppellPolynomial(self.degree - 1,
                                tuple(j * self.coefficients[j] for j in range(1, self.degree + 1)))

    def evaluate(self, values) -> np.ndarray:
        """Float evaluation on a numpy array (Horner)."""
        values = np.asarray(values, dtype=float)
        out = np.zeros_like(values)
        for c in reversed(self.coefficients):
            out = out * values + float(c)
        return out

    def __str__(self):
        return str(sp.expand(self.to_sympy()))


def appell_from_moments(m: MomentSequence, k: int) -> AppellPolynomial:
    """W_k(phi) = sum_j binom(k, j) r_{k-j} phi^j."""
    if k < 0 or k > m.K:
        raise ValidationError(f"degree {k} needs 0 <= k <= {m.K}")
    r = reciprocal_mgf(m, k)
    return AppellPolynomial(k, tuple(sp.expand(sp.binomial(k, j) * r[k - j]) for j in range(k + 1)))


def hermite(k: int, sigma2) -> AppellPolynomial:
    """Probabilists' Hermite with variance sigma2: H_{k+1} = phi H_k - k sigma2 H_{k-1}."""
    if k < 0:
        raise ValidationError(f"Hermite degree must be >= 0, got {k}")
    sigma2 = _exact(sigma2)
    prev = sp.Integer(1)
    cur = PHI
    if k == 0:
        cur = prev
    else:
        for n in range(1, k):
            prev, cur = cur, sp.expand(PHI * cur - n * sigma2 * prev)
    poly = sp.Poly(cur, PHI)
    return AppellPolynomial(k, tuple(poly.coeff_monomial(PHI ** j) for j in range(k + 1)))


def appell_rescale(w: AppellPolynomial, alpha, eps) -> AppellPolynomial:
    """eps^{alpha k} W_k(eps^{-alpha} phi): a_j -> a_j eps^{alpha (k - j)}.

    eps may be a positive rational or a positive symbol.
    """
    alpha = _exact(alpha)
    eps = _exact(eps)
    if eps.is_positive is False or (eps.is_number and eps <= 0):
        raise ValidationError(f"eps must be positive, got {eps}")
    k = w.degree
    return AppellPolynomial(k, tuple(sp.simplify(c * eps ** (alpha * (k - j)))
                                     for j, c in enumerate(w.coefficients)))


class AppellSequence:
    """W_0..W_K for one law, computed once."""

    def __init__(self, moments: MomentSequence, max_degree: Optional[int] = None):
        self.moments = moments
        self.max_degree = moments.K if max_degree is None else max_degree
        if self.max_degree > moments.K:
            raise ValidationError(f"need moments up to order {self.max_degree}, got {moments.K}")
        self.r = reciprocal_mgf(moments, self.max_degree)
        self._polys: Dict[int, AppellPolynomial] = {}

    @classmethod
    def from_moments(cls, m: Sequence, max_degree: Optional[int] = None) -> 'AppellSequence':
        if not isinstance(m, MomentSequence):
            m = MomentSequence(tuple(m))
        return cls(m, max_degree)

    def polynomial(self, k: int) -> AppellPolynomial:
        if k < 0 or k > self.max_degree:
            raise ValidationError(f"degree {k} outside 0..{self.max_degree}")
        if k not in self._polys:
            self._polys[k] = AppellPolynomial(
                k, tuple(sp.expand(sp.binomial(k, j) * self.r[k - j]) for j in range(k + 1)))
        return self._polys[k]

    def rescaled(self, k: int, alpha, eps) -> AppellPolynomial:
        return appell_rescale(self.polynomial(k), alpha, eps)

    def centredness_residual(self, k: int) -> sp.Expr:
        """sum_j binom(k, j) r_{k-j} m_j, which is E[W_k(Z)] and vanishes for k >= 1."""
        return sp.expand(sum(c * self.moments[j] for j, c in enumerate(self.polynomial(k).coefficients)))


# ---------------------------------------------------------------------------
# Composition with formal series
# ---------------------------------------------------------------------------

def substitute_appell(series: FormalSeries, sequence: AppellSequence, base: sp.Expr = PI0) -> FormalSeries:
    """Replace every atom W_j(Pi0) by the explicit polynomial W_j(base)."""
    mapping = {}
    for j in range(1, sequence.max_degree + 1):
        mapping[w_atom(j)] = sequence.polynomial(j).to_sympy(base)
    return series.subs(mapping)


def _split_base(pi: FormalSeries) -> Tuple[sp.Expr, FormalSeries]:
    empty = Multiindex.empty()
    rest = {b: c for b, c in pi.terms.items() if b != empty}
    return pi.coefficient(empty), FormalSeries(pi.params, rest)


def compose_faa_di_bruno(k: int, pi: FormalSeries, sequence: Optional[AppellSequence] = None,
                         cutoff=None) -> FormalSeries:
    """(W_k(Pi))_beta = sum_l binom(k, l) W_{k-l}(Pi0) sum over ordered beta_1 + .. + beta_l = beta.

    The W atoms stay unexpanded and are evaluated at Pi0, so the empty-index
    coefficient of pi must be Pi0 itself or absent. Powers are formed untruncated
    and cut only at the end, since multiplying by a polynomial unit can lower the order.
    """
    if k < 0:
        raise ValidationError(f"composition degree must be >= 0, got {k}")
    if sequence is not None and k > sequence.max_degree:
        raise ValidationError(f"degree {k} exceeds the sequence (max {sequence.max_degree})")
    base, rest = _split_base(pi)
    if base != 0 and sp.expand(base - PI0) != 0:
        raise ValidationError(f"pi_empty must be Pi0 for the W atoms to apply, got {base}")
    result = FormalSeries.zero(pi.params)
    power = FormalSeries.one(pi.params)
    for l in range(k + 1):
        result = result + power.scale(sp.binomial(k, l) * w_atom(k - l))
        power = series_mul(power, rest)
    return result.truncate(cutoff)


def compose_brute_force(k: int, pi: FormalSeries, sequence: AppellSequence, cutoff) -> FormalSeries:
    """W_k(Pi) by substituting Pi0 + sum_beta c_beta t_beta into the explicit polynomial.

    Each marker t_beta tracks z^beta; collecting marker monomials gives the
    series. Coefficients are explicit polynomials in Pi0.
    """
    base, rest = _split_base(pi)
    if base == 0:
        base = PI0
    support = rest.support()
    markers = [sp.Symbol(f"t{i}") for i in range(len(support))]
    argument = base + sum((rest.terms[b] * t for b, t in zip(support, markers)), sp.Integer(0))
    expanded = sp.expand(sequence.polynomial(k).to_sympy(argument))
    terms: Dict[Multiindex, sp.Expr] = {}
    if not markers:
        terms[Multiindex.empty()] = expanded
    else:
        poly = sp.Poly(expanded, *markers)
        for exps in poly.monoms():
            coeff = poly.coeff_monomial(exps)
            beta = Multiindex.empty()
            for b, e in zip(support, exps):
                for _ in range(e):
                    beta = beta + b
            terms[beta] = terms.get(beta, 0) + coeff
    return FormalSeries(pi.params, terms, cutoff)
