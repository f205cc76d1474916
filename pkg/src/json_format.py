"""JSON codecs for every value that crosses the command line.

Rationals travel as "p/q" strings, multiindices as
{"k": {"3": 2}, "n": [{"idx": [0, 0, 0, 0], "mult": 1}]}, coefficients as a
list of {"symbols": [[name, power], ...], "rational": "p/q"} monomials.
Every decoder raises ValidationError naming the offending path.
"""

import logging
from typing import Any, Dict, List, Optional

import networkx as nx
import sympy as sp

from src.config import DEFAULT_PARAMS
from src.errors import ValidationError
from src.formal_series import FormalSeries
from src.multiindex import LinearForm, Multiindex, StructureParams, validate_multiindex
from src.recentering import DPiSpec, GammaEntryQuery, PiSpec
from src.appell import AppellPolynomial, MomentSequence
from src.utils import format_rational, parse_rational, require_payload

logger = logging.getLogger(__name__)

_RATIONAL = (str, int)


def _rational_text(value) -> str:
    value = sp.nsimplify(value) if not isinstance(value, sp.Rational) else value
    if not isinstance(value, sp.Rational):
        raise ValidationError(f"{value} is not rational and cannot be written as 'p/q'")
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

def decode_params(payload: Optional[Dict[str, Any]], where: str = "params") -> StructureParams:
    """Merge a params object over DEFAULT_PARAMS and build StructureParams."""
    merged = dict(DEFAULT_PARAMS)
    if payload is not None:
        payload = require_payload(payload, where, allowed_fields=DEFAULT_PARAMS.keys(),
                                  field_types={'d': int, 'kmin': int, 'alpha': _RATIONAL,
                                               'kappa': _RATIONAL, 'pbar': _RATIONAL, 'kmax': int})
        merged.update(payload)
    return StructureParams(
        d=merged['d'],
        kmin=merged['kmin'],
        alpha=parse_rational(merged['alpha'], f"{where}.alpha"),
        kappa=parse_rational(merged['kappa'], f"{where}.kappa"),
        pbar=None if merged['pbar'] is None else parse_rational(merged['pbar'], f"{where}.pbar"),
        kmax=merged['kmax'],
    )


def encode_params(params: StructureParams) -> dict:
    return params.to_dict()


# ---------------------------------------------------------------------------
# Multiindices and linear forms
# ---------------------------------------------------------------------------

def encode_multiindex(beta: Multiindex) -> dict:
    return {
        'k': {str(k): m for k, m in beta.kpart},
        'n': [{'idx': list(n), 'mult': m} for n, m in beta.npart],
    }


def decode_multiindex(payload: Any, params: Optional[StructureParams] = None,
                      where: str = "beta") -> Multiindex:
    payload = require_payload(payload, where, allowed_fields=('k', 'n'),
                              field_types={'k': dict, 'n': list})
    kpart = []
    for key, mult in payload.get('k', {}).items():
        try:
            k = int(key)
        except ValueError:
            raise ValidationError(f"{where}.k: slot '{key}' is not an integer")
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ValidationError(f"{where}.k.{key}: multiplicity must be an integer")
        kpart.append((k, mult))
    npart = []
    for i, item in enumerate(payload.get('n', [])):
        item = require_payload(item, f"{where}.n[{i}]", required_fields=['idx'],
                               allowed_fields=('idx', 'mult'), field_types={'idx': list, 'mult': int})
        npart.append((tuple(item['idx']), item.get('mult', 1)))
    beta = Multiindex(tuple(kpart), tuple(npart))
    if params is not None:
        validate_multiindex(beta, params, where)
    return beta


def encode_linear_form(form: Optional[LinearForm]) -> Optional[dict]:
    if form is None:
        return None
    return {'const': format_rational(form.c0), 'alpha': format_rational(form.calpha),
            'kappa': format_rational(form.ckappa)}


def decode_linear_form(payload: Any, where: str = "form") -> LinearForm:
    payload = require_payload(payload, where, allowed_fields=('const', 'alpha', 'kappa'),
                              field_types={'const': _RATIONAL, 'alpha': _RATIONAL, 'kappa': _RATIONAL})
    return LinearForm(parse_rational(payload.get('const', 0), f"{where}.const"),
                      parse_rational(payload.get('alpha', 0), f"{where}.alpha"),
                      parse_rational(payload.get('kappa', 0), f"{where}.kappa"))


# ---------------------------------------------------------------------------
# Coefficients and series
# ---------------------------------------------------------------------------

def encode_coefficient(value) -> List[dict]:
    """Polynomial coefficient as a list of monomials with rational factors."""
    value = sp.expand(sp.sympify(value))
    if value == 0:
        return []
    symbols = sorted(value.free_symbols, key=lambda s: s.name)
    if not symbols:
        return [{'symbols': [], 'rational': _rational_text(value)}]
    poly = sp.Poly(value, *symbols)
    out = []
    for exps in poly.monoms():
        coeff = poly.coeff_monomial(exps)
        out.append({
            'symbols': [[s.name, e] for s, e in zip(symbols, exps) if e],
            'rational': _rational_text(coeff),
        })
    return out


def decode_coefficient(payload: Any, where: str = "coeff") -> sp.Expr:
    """Inverse of encode_coefficient; a bare 'p/q' string or int is a constant."""
    if isinstance(payload, _RATIONAL) and not isinstance(payload, bool):
        value = parse_rational(payload, where)
        return sp.Rational(value.numerator, value.denominator)
    if not isinstance(payload, list):
        raise ValidationError(f"{where}: expected a list of monomials or a rational")
    total = sp.Integer(0)
    for i, item in enumerate(payload):
        item = require_payload(item, f"{where}[{i}]", required_fields=['rational'],
                               allowed_fields=('symbols', 'rational'), field_types={'symbols': list})
        value = parse_rational(item['rational'], f"{where}[{i}].rational")
        term = sp.Rational(value.numerator, value.denominator)
        for j, pair in enumerate(item.get('symbols', [])):
            if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str)
                    and isinstance(pair[1], int) and not isinstance(pair[1], bool) and pair[1] >= 0):
                raise ValidationError(f"{where}[{i}].symbols[{j}]: expected [name, power]")
            term *= sp.Symbol(pair[0]) ** pair[1]
        total += term
    return sp.expand(total)


def encode_series(series: FormalSeries) -> dict:
    return {
        'cutoff': None if series.cutoff is None else format_rational(series.cutoff),
        'terms': [{'beta': encode_multiindex(b), 'coeff': encode_coefficient(c)} for b, c in series.items()],
    }


def decode_series(payload: Any, params: StructureParams, where: str = "series") -> FormalSeries:
    payload = require_payload(payload, where, required_fields=['terms'], allowed_fields=('cutoff', 'terms'),
                              field_types={'terms': list, 'cutoff': _RATIONAL})
    terms = {}
    for i, item in enumerate(payload['terms']):
        item = require_payload(item, f"{where}.terms[{i}]", required_fields=['beta', 'coeff'],
                               allowed_fields=('beta', 'coeff'))
        beta = decode_multiindex(item['beta'], params, f"{where}.terms[{i}].beta")
        terms[beta] = terms.get(beta, 0) + decode_coefficient(item['coeff'], f"{where}.terms[{i}].coeff")
    cutoff = payload.get('cutoff')
    return FormalSeries(params, terms, None if cutoff is None else parse_rational(cutoff, f"{where}.cutoff"))


# ---------------------------------------------------------------------------
# Recentering data
# ---------------------------------------------------------------------------

def _decode_entries(payload: dict, params: StructureParams, where: str) -> dict:
    entries = {}
    for i, item in enumerate(payload['entries']):
        path = f"{where}.entries[{i}]"
        item = require_payload(item, path, required_fields=['n', 'beta', 'coeff'],
                               allowed_fields=('n', 'beta', 'coeff'), field_types={'n': list})
        key = (tuple(item['n']), decode_multiindex(item['beta'], params, f"{path}.beta"))
        if key in entries:
            raise ValidationError(f"{path}: duplicate entry for n={list(key[0])}, beta={key[1]}")
        entries[key] = decode_coefficient(item['coeff'], f"{path}.coeff")
    return entries


def decode_pispec(payload: Any, params: StructureParams, where: str = "spec") -> PiSpec:
    payload = require_payload(payload, where, required_fields=['entries'],
                              allowed_fields=('entries', 'strict_population'),
                              field_types={'entries': list, 'strict_population': bool})
    return PiSpec(params, _decode_entries(payload, params, where),
                  strict_population=payload.get('strict_population', False))


def decode_dpispec(payload: Any, params: StructureParams, where: str = "dspec") -> DPiSpec:
    payload = require_payload(payload, where, required_fields=['entries'], allowed_fields=('entries',),
                              field_types={'entries': list})
    return DPiSpec(params, _decode_entries(payload, params, where))


def encode_pispec(spec) -> dict:
    out = {'entries': [{'n': list(n), 'beta': encode_multiindex(b), 'coeff': encode_coefficient(c)}
                       for (n, b), c in sorted(spec.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key()))]}
    if isinstance(spec, PiSpec):
        out['strict_population'] = spec.strict_population
    return out


def decode_gamma_query(payload: Any, params: StructureParams, where: str = "query") -> GammaEntryQuery:
    payload = require_payload(payload, where, required_fields=['beta', 'gamma'],
                              allowed_fields=('beta', 'gamma', 'cutoff'), field_types={'cutoff': _RATIONAL})
    cutoff = payload.get('cutoff')
    return GammaEntryQuery(decode_multiindex(payload['beta'], params, f"{where}.beta"),
                           decode_multiindex(payload['gamma'], params, f"{where}.gamma"),
                           None if cutoff is None else parse_rational(cutoff, f"{where}.cutoff"))


# ---------------------------------------------------------------------------
# Appell data
# ---------------------------------------------------------------------------

def decode_moments(payload: Any, where: str = "moments") -> MomentSequence:
    payload = require_payload(payload, where, required_fields=['m'], allowed_fields=('m',),
                              field_types={'m': list})
    values = [parse_rational(v, f"{where}.m[{i}]") for i, v in enumerate(payload['m'])]
    return MomentSequence(tuple(values))


def encode_moments(m: MomentSequence) -> dict:
    return {'m': [_rational_text(v) for v in m.m]}


def encode_appell_polynomial(w: AppellPolynomial) -> dict:
    coeffs = []
    for c in w.coefficients:
        try:
            coeffs.append(_rational_text(c))
        except ValidationError:
            coeffs.append(str(c))
    return {'degree': w.degree, 'coefficients': coeffs, 'text': str(w)}


# ---------------------------------------------------------------------------
# Hierarchy and graphs
# ---------------------------------------------------------------------------

def encode_pi_minus(expr) -> dict:
    terms = []
    for t in expr.terms:
        terms.append({
            'coeff': format_rational(t.coefficient),
            'eps': encode_linear_form(t.eps_exponent),
            'w': t.w_index,
            'pi': [encode_multiindex(b) for b in t.pi_factors],
            'poly': [list(n) for n in t.poly_factors],
            'counterterm': None if t.counterterm is None else
            {'k': t.counterterm.k, 'beta': encode_multiindex(t.counterterm.beta)},
            'xi': t.xi,
            'taylor': encode_linear_form(t.taylor),
        })
    return {'beta': encode_multiindex(expr.beta), 'text': expr.to_text(), 'terms': terms}


def encode_graph(graph: nx.DiGraph, order: List[tuple]) -> dict:
    ids = {node: i for i, node in enumerate(order)}
    nodes = []
    for node in order:
        data = graph.nodes[node]
        entry = {'id': ids[node], 'kind': data['kind'], 'label': data['label'],
                 'level': format_rational(data['level'])}
        nodes.append(entry)
    edges = sorted(({'from': ids[u], 'to': ids[v], 'relation': d['relation']}
                    for u, v, d in graph.edges(data=True)), key=lambda e: (e['from'], e['to']))
    return {'nodes': nodes, 'edges': edges}
