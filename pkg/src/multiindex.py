"""Multiindices, homogeneities and the populated index sets.

A multiindex assigns multiplicities to nonlinearity slots f_k (odd k >= kmin)
and to polynomial slots e_n (n in N^{1+d}). All scalar quantities attached to
a multiindex are exact LinearForms c0 + calpha*alpha + ckappa*kappa, so that a
rational stand-in for alpha can never silently merge two different forms.
"""

import itertools
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.config import PBAR_MAX_DENOMINATOR
from src.errors import InternalInconsistency, NonGenericParameters, ValidationError
from src.utils import format_rational, parallel_map

logger = logging.getLogger(__name__)

NVector = Tuple[int, ...]
Rational = Union[int, Fraction]

LESS = "less"
EQUAL = "equal"
GREATER = "greater"


# ---------------------------------------------------------------------------
# Linear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    """Exact value c0 + calpha*alpha + ckappa*kappa."""
    c0: Fraction = Fraction(0)
    calpha: Fraction = Fraction(0)
    ckappa: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'c0', Fraction(self.c0))
        object.__setattr__(self, 'calpha', Fraction(self.calpha))
        object.__setattr__(self, 'ckappa', Fraction(self.ckappa))

    @classmethod
    def coerce(cls, value) -> 'LinearForm':
        if isinstance(value, LinearForm):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(Fraction(value))
        raise TypeError(f"cannot use {value!r} as a LinearForm")

    def __add__(self, other):
        try:
            other = LinearForm.coerce(other)
        except TypeError:
            return NotImplemented
        return LinearForm(self.c0 + other.c0, self.calpha + other.calpha, self.ckappa + other.ckappa)

    __radd__ = __add__

    def __neg__(self):
        return LinearForm(-self.c0, -self.calpha, -self.ckappa)

    def __sub__(self, other):
        try:
            other = LinearForm.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LinearForm.coerce(other) - self

    def __mul__(self, scalar):
        if isinstance(scalar, bool) or not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return LinearForm(self.c0 * scalar, self.calpha * scalar, self.ckappa * scalar)

    __rmul__ = __mul__

    def evaluate(self, params: 'StructureParams') -> Fraction:
        return self.c0 + self.calpha * params.alpha + self.ckappa * params.kappa

    @property
    def is_constant(self) -> bool:
        return self.calpha == 0 and self.ckappa == 0

    def __str__(self):
        parts = []
        if self.c0 != 0 or self.is_constant:
            parts.append(format_rational(self.c0))
        for coeff, name in ((self.calpha, "alpha"), (self.ckappa, "kappa")):
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = name if mag == 1 else f"{format_rational(mag)}*{name}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Structure parameters
# ---------------------------------------------------------------------------

def default_pbar(d: int, kmin: int, alpha: Fraction) -> Optional[Fraction]:
    """Smallest p/q with q <= PBAR_MAX_DENOMINATOR inside the admissible window.

    The window is max(2, D/(2-alpha)) < pbar < D/(-kmin*alpha); D/pbar must not be
    an integer. Returns None when the window holds no such rational.
    """
    D = d + 2
    lower = max(Fraction(2), Fraction(D) / (2 - alpha))
    upper = Fraction(D) / (-kmin * alpha)
    if upper <= lower:
        return None
    candidates = []
    for q in range(1, PBAR_MAX_DENOMINATOR + 1):
        p = math.floor(lower * q) + 1
        # a handful per denominator is enough to get past integer D/pbar values
        for _ in range(5):
            value = Fraction(p, q)
            if value >= upper:
                break
            candidates.append(value)
            p += 1
    for value in sorted(set(candidates)):
        if (Fraction(D) / value).denominator != 1:
            return value
    return None


@dataclass(frozen=True)
class StructureParams:
    """Dimension, nonlinearity threshold and the exact rationals alpha, kappa."""
    d: int
    kmin: int
    alpha: Fraction
    kappa: Fraction
    pbar: Optional[Fraction] = None
    kmax: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 3:
            raise ValidationError(f"params.d must be an integer >= 3, got {self.d!r}")
        if isinstance(self.kmin, bool) or not isinstance(self.kmin, int) or self.kmin < 3 or self.kmin % 2 == 0:
            raise ValidationError(f"params.kmin must be an odd integer >= 3, got {self.kmin!r}")
        object.__setattr__(self, 'alpha', Fraction(self.alpha))
        object.__setattr__(self, 'kappa', Fraction(self.kappa))

        alpha, kappa = self.alpha, self.kappa
        if not (Fraction(-2, self.kmin - 1) < alpha < 0):
            raise ValidationError(
                f"params.alpha must satisfy -2/(kmin-1) < alpha < 0 (subcriticality), got {alpha}")
        bound = min(self.a, -2 * alpha)
        if not (0 < kappa < bound):
            raise ValidationError(f"params.kappa must satisfy 0 < kappa < {bound}, got {kappa}")

        if self.kmax is not None:
            if isinstance(self.kmax, bool) or not isinstance(self.kmax, int) \
                    or self.kmax < self.kmin or self.kmax % 2 == 0:
                raise ValidationError(f"params.kmax must be an odd integer >= kmin, got {self.kmax!r}")

        if self.pbar is None:
            pbar = default_pbar(self.d, self.kmin, alpha)
            if pbar is None:
                logger.warning(f"No admissible pbar for d={self.d}, kmin={self.kmin}, alpha={alpha}")
            object.__setattr__(self, 'pbar', pbar)
        else:
            pbar = Fraction(self.pbar)
            object.__setattr__(self, 'pbar', pbar)
            ratio = Fraction(self.D) / pbar
            if pbar <= 2:
                raise ValidationError(f"params.pbar must be > 2, got {pbar}")
            if not (self.kmin * alpha + ratio > 0):
                raise ValidationError(f"params.pbar violates kmin*alpha + D/pbar > 0 (pbar={pbar})")
            if not (alpha - 2 + ratio < 0):
                raise ValidationError(f"params.pbar violates alpha - 2 + D/pbar < 0 (pbar={pbar})")
            if ratio.denominator == 1:
                raise ValidationError(f"params.pbar must make D/pbar non-integer (pbar={pbar})")

    @property
    def D(self) -> int:
        return self.d + 2

    @property
    def half_D(self) -> Fraction:
        return Fraction(self.D, 2)

    @property
    def a(self) -> Fraction:
        return 2 + (self.kmin - 1) * self.alpha

    def admits_k(self, k: int) -> bool:
        return k % 2 == 1 and k >= self.kmin and (self.kmax is None or k <= self.kmax)

    def restricted(self) -> 'StructureParams':
        """Same parameters with the nonlinearity slots collapsed to {kmin}."""
        return replace(self, kmax=self.kmin)

    def zero_n(self) -> NVector:
        return (0,) * (self.d + 1)

    def to_dict(self) -> dict:
        return {
            'd': self.d,
            'kmin': self.kmin,
            'alpha': format_rational(self.alpha),
            'kappa': format_rational(self.kappa),
            'pbar': None if self.pbar is None else format_rational(self.pbar),
            'kmax': self.kmax
        }


# ---------------------------------------------------------------------------
# Multiindices
# ---------------------------------------------------------------------------

def _canonical_pairs(items, key_check) -> tuple:
    if isinstance(items, Mapping):
        items = items.items()
    merged = {}
    for key, mult in items:
        key = key_check(key)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 0:
            raise ValidationError(f"multiplicity of {key} must be a nonnegative integer, got {mult!r}")
        if mult:
            merged[key] = merged.get(key, 0) + mult
    return tuple(sorted(merged.items()))


def _check_k(k):
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValidationError(f"k-slot must be a positive integer, got {k!r}")
    return k


def _check_n(n):
    n = tuple(n)
    if not n or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in n):
        raise ValidationError(f"n-slot must be a tuple of nonnegative integers, got {n!r}")
    return n


@dataclass(frozen=True)
class Multiindex:
    """Finitely supported multiplicities on f_k and e_n slots, in canonical sparse form."""
    kpart: Tuple[Tuple[int, int], ...] = ()
    npart: Tuple[Tuple[NVector, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'kpart', _canonical_pairs(self.kpart, _check_k))
        object.__setattr__(self, 'npart', _canonical_pairs(self.npart, _check_n))

    @classmethod
    def empty(cls) -> 'Multiindex':
        return cls()

    @classmethod
    def unit_k(cls, k: int, mult: int = 1) -> 'Multiindex':
        return cls(kpart=((k, mult),))

    @classmethod
    def unit_n(cls, n: Sequence[int], mult: int = 1) -> 'Multiindex':
        return cls(npart=((tuple(n), mult),))

    def k_mult(self, k: int) -> int:
        return dict(self.kpart).get(k, 0)

    def n_mult(self, n: Sequence[int]) -> int:
        return dict(self.npart).get(tuple(n), 0)

    @property
    def k_count(self) -> int:
        return sum(m for _, m in self.kpart)

    @property
    def n_count(self) -> int:
        return sum(m for _, m in self.npart)

    def k_count_above(self, kmin: int) -> int:
        return sum(m for k, m in self.kpart if k > kmin)

    @property
    def is_empty(self) -> bool:
        return not self.kpart and not self.npart

    @property
    def is_purely_polynomial(self) -> bool:
        """True for a single polynomial unit e_n."""
        return not self.kpart and len(self.npart) == 1 and self.npart[0][1] == 1

    @property
    def has_polynomial_part(self) -> bool:
        return bool(self.npart)

    def polynomial_units(self) -> List[NVector]:
        return [n for n, m in self.npart for _ in range(m)]

    def units(self) -> List[Tuple[str, object]]:
        """Generators with repetition, k-slots first, in canonical order."""
        out = [('k', k) for k, m in self.kpart for _ in range(m)]
        out.extend(('n', n) for n, m in self.npart for _ in range(m))
        return out

    def __add__(self, other: 'Multiindex') -> 'Multiindex':
        if not isinstance(other, Multiindex):
            return NotImplemented
        return Multiindex(self.kpart + other.kpart, self.npart + other.npart)

    def subtract(self, other: 'Multiindex') -> Optional['Multiindex']:
        """self - other, or None when other is not componentwise below self."""
        kmap = dict(self.kpart)
        for k, m in other.kpart:
            left = kmap.get(k, 0) - m
            if left < 0:
                return None
            kmap[k] = left
        nmap = dict(self.npart)
        for n, m in other.npart:
            left = nmap.get(n, 0) - m
            if left < 0:
                return None
            nmap[n] = left
        return Multiindex(kmap, nmap)

    def __sub__(self, other: 'Multiindex') -> 'Multiindex':
        result = self.subtract(other)
        if result is None:
            raise ValueError(f"{other} is not contained in {self}")
        return result

    def contains(self, other: 'Multiindex') -> bool:
        return self.subtract(other) is not None

    def kpart_only(self) -> 'Multiindex':
        return Multiindex(kpart=self.kpart)

    def sort_key(self) -> tuple:
        return (self.kpart, self.npart)

    def __str__(self):
        if self.is_empty:
            return "0"
        parts = []
        for k, m in self.kpart:
            parts.append(f"f{k}" if m == 1 else f"{m}f{k}")
        for n, m in self.npart:
            unit = "e(" + ",".join(str(v) for v in n) + ")"
            parts.append(unit if m == 1 else f"{m}{unit}")
        return "+".join(parts)


def validate_multiindex(beta: Multiindex, params: StructureParams, where: str = "beta") -> Multiindex:
    """Check the k-slots and the arity of the n-slots against params."""
    if not isinstance(beta, Multiindex):
        raise ValidationError(f"{where}: expected a Multiindex, got {type(beta).__name__}")
    for k, _ in beta.kpart:
        if not params.admits_k(k):
            raise ValidationError(f"{where}: k-slot {k} is not an admitted odd k >= {params.kmin}")
    for n, _ in beta.npart:
        if len(n) != params.d + 1:
            raise ValidationError(f"{where}: n-slot {n} must have {params.d + 1} entries")
    return beta


def parabolic_degree(n: Sequence[int], d: Optional[int] = None) -> int:
    """|n| = 2 n_0 + n_1 + ... + n_d."""
    n = tuple(n)
    if d is not None and len(n) != d + 1:
        raise ValidationError(f"n = {n} must have {d + 1} entries")
    if not n or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in n):
        raise ValidationError(f"n = {n} must be a nonempty tuple of nonnegative integers")
    return 2 * n[0] + sum(n[1:])


@lru_cache(maxsize=None)
def homogeneity(beta: Multiindex, params: StructureParams) -> LinearForm:
    """|beta| = alpha(1 + (kmin-1)sum beta(k) - sum beta(n)) + 2 sum beta(k) + sum |n| beta(n)."""
    K = beta.k_count
    N = beta.n_count
    c0 = 2 * K + sum(parabolic_degree(n) * m for n, m in beta.npart)
    return LinearForm(c0, 1 + (params.kmin - 1) * K - N, 0)


def bracket(beta: Multiindex) -> int:
    """[beta] = sum (k-1) beta(k) - sum beta(n)."""
    return sum((k - 1) * m for k, m in beta.kpart) - beta.n_count


@lru_cache(maxsize=None)
def order(beta: Multiindex, params: StructureParams) -> LinearForm:
    return homogeneity(beta, params) + params.half_D * (1 + bracket(beta))


@lru_cache(maxsize=None)
def order_value(beta: Multiindex, params: StructureParams) -> Fraction:
    return order(beta, params).evaluate(params)


@lru_cache(maxsize=None)
def discounted_homogeneity(beta: Multiindex, params: StructureParams) -> LinearForm:
    return homogeneity(beta, params) - LinearForm(0, 0, beta.k_count_above(params.kmin))


def is_special_form(beta: Multiindex, params: StructureParams) -> bool:
    """beta = f_kmin + e_{n_1} + ... + e_{n_kmin}."""
    return beta.kpart == ((params.kmin, 1),) and beta.n_count == params.kmin


def is_populated(beta: Multiindex, params: StructureParams) -> bool:
    return beta.is_purely_polynomial or is_special_form(beta, params) or bracket(beta) >= 0


def pi_may_be_nonzero(beta: Multiindex) -> bool:
    """Model components vanish unless [beta] >= 0 or beta is a single polynomial unit."""
    return beta.is_purely_polynomial or bracket(beta) >= 0


def compare_forms(a, b, params: StructureParams) -> str:
    """Compare two LinearForms (or rationals) by their exact values.

    Equal values with different coefficients raise NonGenericParameters.
    """
    a = LinearForm.coerce(a)
    b = LinearForm.coerce(b)
    va = a.evaluate(params)
    vb = b.evaluate(params)
    if va < vb:
        return LESS
    if va > vb:
        return GREATER
    if a != b:
        raise NonGenericParameters(f"forms ({a}) and ({b}) both evaluate to {format_rational(va)}")
    return EQUAL


def compare_order(beta: Multiindex, other: Multiindex, params: StructureParams) -> str:
    return compare_forms(order(beta, params), order(other, params), params)


# ---------------------------------------------------------------------------
# Combinatorial helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def n_vectors_up_to(d: int, degree: int) -> Tuple[NVector, ...]:
    """All n in N^{1+d} with |n| <= degree, sorted by (|n|, n)."""
    if degree < 0:
        return ()
    out = []
    for n0 in range(degree // 2 + 1):
        room = degree - 2 * n0
        for spatial in itertools.product(range(room + 1), repeat=d):
            if sum(spatial) <= room:
                out.append((n0,) + spatial)
    out.sort(key=lambda n: (parabolic_degree(n), n))
    return tuple(out)


def sub_multiindices(beta: Multiindex) -> Iterator[Multiindex]:
    """Every gamma with 0 <= gamma <= beta componentwise, beta itself and 0 included."""
    keys = [('k', k) for k, _ in beta.kpart] + [('n', n) for n, _ in beta.npart]
    ranges = [range(m + 1) for _, m in beta.kpart] + [range(m + 1) for _, m in beta.npart]
    for mults in itertools.product(*ranges):
        kmap = {}
        nmap = {}
        for (kind, key), m in zip(keys, mults):
            if kind == 'k':
                kmap[key] = m
            else:
                nmap[key] = m
        yield Multiindex(kmap, nmap)


def ordered_decompositions(rho: Multiindex, parts: int, accept=None) -> Iterator[Tuple[Multiindex, ...]]:
    """Ordered tuples (b_1, ..., b_parts) of nonzero multiindices summing to rho.

    accept, if given, filters every part.
    """
    if parts == 0:
        if rho.is_empty:
            yield ()
        return
    if rho.k_count + rho.n_count < parts:
        return
    for first in sub_multiindices(rho):
        if first.is_empty or (accept is not None and not accept(first)):
            continue
        rest = rho - first
        for tail in ordered_decompositions(rest, parts - 1, accept):
            yield (first,) + tail


# ---------------------------------------------------------------------------
# Enumeration of populated multiindices
# ---------------------------------------------------------------------------

def _cutoff_value(cutoff, params: StructureParams) -> Fraction:
    if isinstance(cutoff, LinearForm):
        return cutoff.evaluate(params)
    if isinstance(cutoff, bool) or not isinstance(cutoff, (int, Fraction)):
        raise ValidationError(f"cutoff must be an exact rational or a LinearForm, got {cutoff!r}")
    return Fraction(cutoff)


def _polynomial_sector(params, limit, hom_limit) -> List[Multiindex]:
    top = limit if hom_limit is None else min(limit, hom_limit)
    if top < 0:
        return []
    return [Multiindex.unit_n(n) for n in n_vectors_up_to(params.d, math.floor(top))]


def _special_sector(params, limit, hom_limit) -> List[Multiindex]:
    # order and homogeneity of f_kmin + sum e_{n_i} both equal 2 + sum |n_i|
    top = limit if hom_limit is None else min(limit, hom_limit)
    budget = top - 2
    if budget < 0:
        return []
    budget = math.floor(budget)
    candidates = n_vectors_up_to(params.d, budget)
    degrees = [parabolic_degree(n) for n in candidates]
    out = []

    def walk(start: int, chosen: List[NVector], used: int):
        if len(chosen) == params.kmin:
            out.append(Multiindex(((params.kmin, 1),), [(n, 1) for n in chosen]))
            return
        for i in range(start, len(candidates)):
            if used + degrees[i] > budget:
                break
            chosen.append(candidates[i])
            walk(i, chosen, used + degrees[i])
            chosen.pop()

    walk(0, [], 0)
    return out


def _k_sectors(params, limit, hom_limit) -> List[Tuple[Tuple[int, int], ...]]:
    """k-parts whose best-case completion can still have order <= limit.

    With B = sum (k-1) beta(k) and at most B polynomial units, the order is at
    least alpha + D/2 + a*K - alpha*B; every k-slot raises that bound by
    a - alpha*(k-1) > 0, so the search terminates.
    """
    alpha = params.alpha
    base = alpha + params.half_D
    sectors = []

    def grow(current: List[int], bound: Fraction, hom_bound: Fraction):
        sectors.append(tuple(current))
        k = current[-1] if current else params.kmin
        while params.kmax is None or k <= params.kmax:
            step = params.a - alpha * (k - 1)
            if bound + step > limit or (hom_limit is not None and hom_bound + params.a > hom_limit):
                break
            grow(current + [k], bound + step, hom_bound + params.a)
            k += 2

    grow([], base, alpha)
    out = []
    for ks in sectors:
        counts = {}
        for k in ks:
            counts[k] = counts.get(k, 0) + 1
        out.append(tuple(sorted(counts.items())))
    return out


def _bracket_sector(task) -> List[Multiindex]:
    """All beta with the given k-part, [beta] >= 0 and order (homogeneity) within limits."""
    kpart, params, limit, hom_limit = task
    alpha = params.alpha
    half_D = params.half_D
    K = sum(m for _, m in kpart)
    B = sum((k - 1) * m for k, m in kpart)
    base = alpha + half_D + params.a * K + half_D * B
    hom_base = alpha + params.a * K
    c_zero = -alpha - half_D

    # largest |n| any single unit can have while the others sit at n = 0
    max_deg = limit - base - max(B - 1, 0) * c_zero + alpha + half_D
    if hom_limit is not None:
        max_deg = min(max_deg, hom_limit - hom_base + alpha)
    candidates = n_vectors_up_to(params.d, math.floor(max_deg)) if max_deg >= 0 else ()
    costs = [parabolic_degree(n) - alpha - half_D for n in candidates]
    hom_costs = [parabolic_degree(n) - alpha for n in candidates]

    found = []

    def walk(start: int, chosen: List[NVector], total: Fraction, hom_total: Fraction):
        if total <= limit and (hom_limit is None or hom_total <= hom_limit):
            found.append(Multiindex(kpart, [(n, 1) for n in chosen]))
        left = B - len(chosen)
        if left == 0:
            return
        for i in range(start, len(candidates)):
            cost = costs[i]
            best = total + cost + (left - 1) * min(cost, 0)
            if best > limit:
                break
            if hom_limit is not None and hom_total + hom_costs[i] > hom_limit:
                break
            chosen.append(candidates[i])
            walk(i, chosen, total + cost, hom_total + hom_costs[i])
            chosen.pop()

    walk(0, [], base, hom_base)
    return found


def enumerate_populated(cutoff, params: StructureParams, max_homogeneity=None,
                        jobs: int = 1, bound_factor: int = 1) -> List[Multiindex]:
    """Populated beta with |beta|_< <= cutoff, sorted by (order, canonical key).

    Args:
        cutoff: rational or LinearForm order bound
        params: structure parameters
        max_homogeneity: optional ceiling on |beta|, pruned soundly during the search
        jobs: worker processes for the [beta] >= 0 sector, split by k-part
        bound_factor: inflates the search bounds; the exact filter is unchanged

    Raises:
        NonGenericParameters: two distinct order forms share a value
    """
    limit = _cutoff_value(cutoff, params)
    hom_limit = None if max_homogeneity is None else _cutoff_value(max_homogeneity, params)
    search = limit + (bound_factor - 1) * max(abs(limit), 1)
    hom_search = None if hom_limit is None else hom_limit + (bound_factor - 1) * max(abs(hom_limit), 1)

    candidates = set(_polynomial_sector(params, search, hom_search))
    candidates.update(_special_sector(params, search, hom_search))
    sectors = _k_sectors(params, search, hom_search)
    tasks = [(kpart, params, search, hom_search) for kpart in sectors]
    for chunk in parallel_map(_bracket_sector, tasks, jobs):
        candidates.update(chunk)

    result = []
    for beta in candidates:
        if not is_populated(beta, params):
            continue
        if order_value(beta, params) > limit:
            continue
        if hom_limit is not None and homogeneity(beta, params).evaluate(params) > hom_limit:
            continue
        result.append(beta)
    result.sort(key=lambda b: (order_value(b, params), b.sort_key()))

    for prev, cur in zip(result, result[1:]):
        if order_value(prev, params) == order_value(cur, params):
            compare_order(prev, cur, params)

    logger.debug(f"enumerate_populated(cutoff={format_rational(limit)}): "
                 f"{len(result)} indices from {len(sectors)} k-sectors")
    return result


def validate_genericity(params: StructureParams, cutoff) -> List[Multiindex]:
    """Run the genericity validators over enumerate_populated(cutoff).

    Checks that no two distinct order forms collide, that the discounted
    homogeneity is never an integer on [beta] >= 0, and that for every
    integer m, m < |beta| exactly when m < <beta>.
    """
    betas = enumerate_populated(cutoff, params)
    for beta in betas:
        hom = homogeneity(beta, params).evaluate(params)
        disc = discounted_homogeneity(beta, params).evaluate(params)
        if bracket(beta) >= 0 and disc.denominator == 1:
            raise NonGenericParameters(
                f"discounted homogeneity of {beta} is the integer {format_rational(disc)}")
        if math.ceil(disc) < hom:
            raise NonGenericParameters(
                f"kappa separates the integer {math.ceil(disc)} from |{beta}| = {format_rational(hom)}")
    logger.info(f"Genericity validated over {len(betas)} populated indices")
    return betas


def _is_degree_two_family(beta: Multiindex, params: StructureParams) -> bool:
    if beta.is_purely_polynomial:
        return parabolic_degree(beta.npart[0][0]) == 2
    zero = params.zero_n()
    return (len(beta.kpart) == 1 and beta.kpart[0][1] == 1
            and beta.npart == ((zero, params.kmin),))


def classify_degree_two(cutoff, params: StructureParams) -> List[Multiindex]:
    """Populated beta of order <= cutoff with homogeneity exactly 2.

    Raises:
        InternalInconsistency: a member outside {e_n: |n| = 2} and {f_k + kmin e_0}
    """
    found = []
    for beta in enumerate_populated(cutoff, params, max_homogeneity=2):
        if compare_forms(homogeneity(beta, params), 2, params) != EQUAL:
            continue
        if not _is_degree_two_family(beta, params):
            raise InternalInconsistency(f"{beta} has homogeneity 2 but is outside the two degree-two families")
        found.append(beta)
    return found
