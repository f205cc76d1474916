"""Symbolic expansion of the Pi^- hierarchy and its dependency DAG.

Pi^-_beta is a finite sum of terms built from xi, Pi_beta' atoms, the Appell
atoms W_{j,eps}(Pi_0), eps-powers, monomials (. - x)^n and opaque counterterm
symbols c^{(k)}_beta0. Expansions are cached per (beta, params).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy as sp

from src.appell import PI0, AppellSequence, w_atom
from src.errors import InternalInconsistency, ValidationError
from src.multiindex import (GREATER, LESS, LinearForm, Multiindex, NVector, StructureParams,
                            bracket, compare_forms, enumerate_populated, homogeneity, is_populated,
                            order_value, ordered_decompositions, parabolic_degree, sub_multiindices,
                            validate_multiindex)
from src.utils import format_rational

logger = logging.getLogger(__name__)

EPS = sp.Symbol("eps", positive=True)


@dataclass(frozen=True)
class CountertermKey:
    """The opaque constant c^{(k)}_beta; beta has no polynomial part."""
    k: int
    beta: Multiindex

    def label(self) -> str:
        return f"c{self.k}[{self.beta}]"

    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.label())


def _term_sort_key(term: 'PiMinusTerm') -> tuple:
    ct = term.counterterm
    return (
        term.xi is False,
        ct is not None,
        (term.eps_exponent.c0, term.eps_exponent.calpha),
        -term.w_index,
        tuple(b.sort_key() for b in term.pi_factors),
        term.poly_factors,
        () if ct is None else (ct.k, ct.beta.sort_key()),
    )


@dataclass(frozen=True)
class PiMinusTerm:
    coefficient: Fraction
    eps_exponent: LinearForm = field(default_factory=LinearForm)
    w_index: int = 0
    pi_factors: Tuple[Multiindex, ...] = ()
    poly_factors: Tuple[NVector, ...] = ()
    counterterm: Optional[CountertermKey] = None
    xi: bool = False
    taylor: Optional[LinearForm] = None

    def structure(self) -> tuple:
        """Everything but the coefficient; equal structures merge."""
        return (self.eps_exponent, self.w_index, self.pi_factors, self.poly_factors,
                self.counterterm, self.xi, self.taylor)

    def monomial(self) -> Optional[NVector]:
        """Total exponent of (. - x), or None when the term carries no monomial."""
        if not self.poly_factors:
            return None
        total = tuple(sum(col) for col in zip(*self.poly_factors))
        return total if any(total) else None

    def factor_count(self) -> int:
        return len(self.pi_factors) + len(self.poly_factors)

    def to_text(self) -> str:
        factors = []
        if self.eps_exponent != LinearForm():
            factors.append(f"eps^({self.eps_exponent})")
        if self.w_index > 0:
            factors.append(f"W{self.w_index}(Pi0)")
        factors.extend(f"Pi[{b}]" for b in self.pi_factors)
        mono = self.monomial()
        if mono is not None:
            factors.append("(.-x)^(" + ",".join(str(v) for v in mono) + ")")
        if self.counterterm is not None:
            factors.append(self.counterterm.label())
        if self.xi:
            factors.append("xi")
        body = " * ".join(factors)
        if self.taylor is not None:
            body = f"(id - T^{{<{self.taylor}}})[{body or '1'}]"
        coeff = self.coefficient
        if not body:
            return format_rational(coeff)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        return f"{format_rational(coeff)} * {body}"

    def to_sympy(self, params: StructureParams, sequence: Optional[AppellSequence] = None,
                 eps=None, point: Optional[Sequence[sp.Symbol]] = None,
                 base: Optional[Sequence[sp.Symbol]] = None) -> sp.Expr:
        eps_value = EPS if eps is None else sp.sympify(eps)
        value = sp.Rational(self.coefficient.numerator, self.coefficient.denominator)
        exponent = self.eps_exponent.evaluate(params)
        if exponent != 0:
            value *= eps_value ** sp.Rational(exponent.numerator, exponent.denominator)
        if self.w_index > 0:
            if sequence is None:
                value *= w_atom(self.w_index)
            elif eps is None:
                value *= sequence.polynomial(self.w_index).to_sympy(PI0)
            else:
                value *= sequence.rescaled(self.w_index, params.alpha, eps).to_sympy(PI0)
        for b in self.pi_factors:
            value *= sp.Symbol(f"Pi[{b}]")
        mono = self.monomial()
        if mono is not None:
            point = point or tuple(sp.Symbol(f"w{i}") for i in range(len(mono)))
            base = base or tuple(sp.Symbol(f"x{i}") for i in range(len(mono)))
            for wi, xi, ni in zip(point, base, mono):
                value *= (wi - xi) ** ni
        if self.counterterm is not None:
            value *= self.counterterm.symbol()
        if self.xi:
            value *= sp.Symbol("xi")
        if self.taylor is not None:
            cutoff = self.taylor.evaluate(params)
            value = sp.Function("TaylorRemainder")(value, sp.Rational(cutoff.numerator, cutoff.denominator))
        return value


@dataclass(frozen=True)
class PiMinusExpr:
    beta: Multiindex
    params: StructureParams
    terms: Tuple[PiMinusTerm, ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def counterterms(self) -> List[CountertermKey]:
        seen = {t.counterterm for t in self.terms if t.counterterm is not None}
        return sorted(seen, key=lambda c: (c.k, c.beta.sort_key()))

    def pi_dependencies(self) -> List[Multiindex]:
        """Every Pi_beta' the expression reads, Pi_0 included when a W_j with j >= 1 occurs."""
        deps = {b for t in self.terms for b in t.pi_factors}
        if any(t.w_index > 0 for t in self.terms):
            deps.add(Multiindex.empty())
        return sorted(deps, key=lambda b: (order_value(b, self.params), b.sort_key()))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        text = self.terms[0].to_text()
        for term in self.terms[1:]:
            piece = term.to_text()
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    def __str__(self):
        return f"Pi^-[{self.beta}] = {self.to_text()}"

    def to_ast(self) -> dict:
        from src.json_format import encode_pi_minus
        return encode_pi_minus(self)

    def to_sympy(self, sequence: Optional[AppellSequence] = None, eps=None) -> sp.Expr:
        """The expression as sympy; with a sequence the W atoms become explicit polynomials in Pi0."""
        return sp.Add(*(t.to_sympy(self.params, sequence, eps) for t in self.terms))


# ---------------------------------------------------------------------------
# Support predicates
# ---------------------------------------------------------------------------

def counterterm_support(k: int, beta: Multiindex, params: StructureParams) -> bool:
    """Whether c^{(k)}_beta may be nonzero.

    Requires k odd, beta a nonempty sum of at least two f-slots with no
    polynomial part, and |beta| < 2 + k*alpha.
    """
    if isinstance(k, bool) or not isinstance(k, int) or not (0 <= k < params.kmin):
        raise ValidationError(f"counterterm index k must satisfy 0 <= k < {params.kmin}, got {k!r}")
    if k % 2 == 0 or beta.is_empty or beta.has_polynomial_part or beta.k_count < 2:
        return False
    return compare_forms(homogeneity(beta, params), LinearForm(2, k, 0), params) == LESS


def taylor_cutoff(beta: Multiindex, params: StructureParams) -> Optional[LinearForm]:
    """|beta| - 2 when the Taylor remainder acts on Pi^-_beta, else None."""
    if beta.k_count_above(params.kmin) == 0:
        return None
    cutoff = homogeneity(beta, params) - 2
    if compare_forms(cutoff, 0, params) == GREATER:
        return cutoff
    return None


def special_form_coefficient(beta: Multiindex, params: StructureParams) -> Fraction:
    """kmin! / prod beta(n)!, the number of orderings of the polynomial units."""
    denom = 1
    for _, m in beta.npart:
        denom *= math.factorial(m)
    return Fraction(math.factorial(params.kmin), denom)


def _is_live_part(part: Multiindex) -> bool:
    # Pi_part vanishes otherwise
    return part.is_purely_polynomial or bracket(part) >= 0


def _split_parts(parts: Sequence[Multiindex]) -> Tuple[Tuple[Multiindex, ...], Tuple[NVector, ...]]:
    pis = []
    polys = []
    for part in parts:
        if part.is_purely_polynomial:
            polys.append(part.npart[0][0])
        else:
            pis.append(part)
    return tuple(sorted(pis, key=Multiindex.sort_key)), tuple(sorted(polys))


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

def _merge(raw: Iterable[PiMinusTerm]) -> Tuple[PiMinusTerm, ...]:
    merged: Dict[tuple, PiMinusTerm] = {}
    for term in raw:
        key = term.structure()
        if key in merged:
            prev = merged[key]
            merged[key] = PiMinusTerm(prev.coefficient + term.coefficient, *key)
        else:
            merged[key] = term
    kept = [t for t in merged.values() if t.coefficient != 0]
    return tuple(sorted(kept, key=_term_sort_key))


@lru_cache(maxsize=None)
def expand_pi_minus(beta: Multiindex, params: StructureParams) -> PiMinusExpr:
    """Expand Pi^-_beta into its hierarchy terms.

    Raises:
        ValidationError: beta is not populated
        NonGenericParameters: a support or Taylor comparison ties
    """
    validate_multiindex(beta, params)
    if not is_populated(beta, params):
        raise ValidationError(f"Pi^-[{beta}] vanishes: {beta} is not populated")

    raw: List[PiMinusTerm] = []
    if beta.is_empty:
        raw.append(PiMinusTerm(Fraction(1), xi=True))

    cutoff = taylor_cutoff(beta, params)
    for k, _ in beta.kpart:
        rho = beta - Multiindex.unit_k(k)
        eps = LinearForm(0, params.kmin - k, 0)
        for l in range(0, k + 1):
            for parts in ordered_decompositions(rho, l, accept=_is_live_part):
                pis, polys = _split_parts(parts)
                raw.append(PiMinusTerm(Fraction(math.comb(k, l)), eps, k - l, pis, polys,
                                       taylor=cutoff))

    for k in range(1, params.kmin, 2):
        for beta0 in sub_multiindices(beta.kpart_only()):
            if beta0.is_empty or not counterterm_support(k, beta0, params):
                continue
            key = CountertermKey(k, beta0)
            rho = beta - beta0
            for l in range(0, k + 1):
                for parts in ordered_decompositions(rho, l, accept=_is_live_part):
                    pis, polys = _split_parts(parts)
                    raw.append(PiMinusTerm(Fraction(-math.comb(k, l)), LinearForm(), k - l,
                                           pis, polys, counterterm=key))

    expr = PiMinusExpr(beta, params, _merge(raw))
    logger.debug(f"expand_pi_minus({beta}): {len(expr.terms)} terms")
    return expr


def term_bookkeeping_holds(term: PiMinusTerm, beta: Multiindex, params: StructureParams) -> bool:
    """Homogeneity balance of one term.

    First-sum terms: eps exponent + W index * alpha + sum |beta_i| + 2 = |beta|.
    Counterterm terms: |beta_0| + sum |beta_i| - l * alpha = |beta|.
    """
    if term.xi:
        return beta.is_empty
    factors = LinearForm()
    for b in term.pi_factors:
        factors = factors + homogeneity(b, params)
    for n in term.poly_factors:
        factors = factors + parabolic_degree(n)
    if term.counterterm is None:
        total = term.eps_exponent + LinearForm(0, term.w_index, 0) + factors + 2
    else:
        total = homogeneity(term.counterterm.beta, params) + factors \
            - LinearForm(0, term.factor_count(), 0)
    return total == homogeneity(beta, params)


def list_counterterms(cutoff, params: StructureParams) -> List[CountertermKey]:
    """Supported c^{(k)}_beta0 with beta0 + k e_0 populated of order <= cutoff."""
    zero = params.zero_n()
    found = []
    for beta in enumerate_populated(cutoff, params):
        if any(n != zero for n, _ in beta.npart):
            continue
        k = beta.n_mult(zero)
        beta0 = beta.kpart_only()
        if k < params.kmin and not beta0.is_empty and counterterm_support(k, beta0, params):
            found.append(CountertermKey(k, beta0))
    return found


# ---------------------------------------------------------------------------
# Dependency DAG
# ---------------------------------------------------------------------------

def _pi_node(beta: Multiindex) -> tuple:
    return ("Pi", beta)


def _c_node(key: CountertermKey) -> tuple:
    return ("c", key.k, key.beta)


def _add_pi(graph: nx.DiGraph, beta: Multiindex, params: StructureParams):
    node = _pi_node(beta)
    if node not in graph:
        graph.add_node(node, kind='noise' if beta.is_empty else 'pi',
                       label="xi" if beta.is_empty else f"Pi[{beta}]",
                       level=order_value(beta, params), beta=beta)
    return node


def _add_c(graph: nx.DiGraph, key: CountertermKey, params: StructureParams):
    node = _c_node(key)
    if node not in graph:
        host = key.beta + Multiindex.unit_n(params.zero_n(), key.k)
        graph.add_node(node, kind='counterterm', label=key.label(),
                       level=order_value(host, params), beta=key.beta, k=key.k)
    return node


def dependency_graph(beta: Multiindex, params: StructureParams) -> nx.DiGraph:
    """DAG of everything Pi^-_beta depends on, closed under expansion.

    An edge u -> v with relation 'depends' means u is built from v. A
    counterterm c^{(k)}_beta0 is fixed together with Pi_{beta0 + k e_0}; that
    pairing is a 'fixes' edge and the counterterm inherits the other
    dependencies of its host.

    Raises:
        InternalInconsistency: a cycle, or a 'depends' edge that does not descend in order
    """
    graph = nx.DiGraph()
    zero = params.zero_n()
    stack = [beta]
    seen = set()
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        node = _add_pi(graph, current, params)
        if current.is_empty:
            continue
        expr = expand_pi_minus(current, params)
        own = None
        if all(n == zero for n, _ in current.npart):
            own = CountertermKey(current.n_mult(zero), current.kpart_only())
        deps = [_add_pi(graph, b, params) for b in expr.pi_dependencies()]
        stack.extend(b for b in expr.pi_dependencies() if b not in seen)
        for key in expr.counterterms():
            c_node = _add_c(graph, key, params)
            if key == own:
                graph.add_edge(node, c_node, relation='fixes')
            else:
                deps.append(c_node)
                host = key.beta + Multiindex.unit_n(zero, key.k)
                if host not in seen:
                    stack.append(host)
        for dep in deps:
            graph.add_edge(node, dep, relation='depends')
        if own is not None and _c_node(own) in graph:
            for dep in deps:
                graph.add_edge(_c_node(own), dep, relation='depends')

    check_dependency_graph(graph, params)
    logger.info(f"dependency_graph({beta}): {graph.number_of_nodes()} nodes, "
                f"{graph.number_of_edges()} edges")
    return graph


def check_dependency_graph(graph: nx.DiGraph, params: StructureParams):
    """Acyclicity, strict descent of every 'depends' edge, and populated Pi nodes."""
    if not nx.is_directed_acyclic_graph(graph):
        raise InternalInconsistency(f"dependency graph has a cycle: {nx.find_cycle(graph)}")
    for u, v, data in graph.edges(data=True):
        if data['relation'] != 'depends':
            continue
        if not graph.nodes[v]['level'] < graph.nodes[u]['level']:
            raise InternalInconsistency(
                f"{graph.nodes[u]['label']} depends on {graph.nodes[v]['label']} of no smaller order")
    for node, data in graph.nodes(data=True):
        if data['kind'] != 'counterterm' and not is_populated(data['beta'], params):
            raise InternalInconsistency(f"{data['label']} is not populated")


def _node_key(node: tuple) -> tuple:
    if node[0] == "Pi":
        return (0, node[1].sort_key())
    return (1, node[1], node[2].sort_key())


def induction_order(graph: nx.DiGraph) -> List[tuple]:
    """Nodes by (order, canonical key); every node comes after what it depends on."""
    return sorted(graph.nodes, key=lambda n: (graph.nodes[n]['level'], _node_key(n)))


def restricted_graph_agrees(beta: Multiindex, params: StructureParams) -> bool:
    """The graph of beta seen on kmin-only nodes equals the one built with k-slots collapsed to {kmin}."""
    if beta.k_count_above(params.kmin) > 0:
        raise ValidationError(f"{beta} uses k-slots above kmin")
    full = dependency_graph(beta, params)
    restricted = dependency_graph(beta, params.restricted())

    def keep(node):
        data = full.nodes[node]
        return data['beta'].k_count_above(params.kmin) == 0

    sub = full.subgraph([n for n in full.nodes if keep(n)])
    return set(sub.nodes) == set(restricted.nodes) and set(sub.edges) == set(restricted.edges)
