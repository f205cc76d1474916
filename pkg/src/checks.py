"""Executable property suites behind `mirs check`.

Each suite returns CheckResult rows (suite, property, lemma, status, detail).
A property fails with its first counterexample; NonGenericParameters is never
swallowed here, it aborts the run.
"""

import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np
import sympy as sp

from src.appell import (AppellSequence, MomentSequence, PI0, appell_from_moments, appell_rescale,
                        compose_brute_force, compose_faa_di_bruno, gaussian_moments, hermite,
                        rescale_moments, substitute_appell)
from src.config import CHECK_SETTINGS, GENERICITY_CUTOFF
from src.errors import InternalInconsistency
from src.formal_series import (FormalSeries, coeff_is_zero, project_T, project_Ttilde, series_derivative,
                               series_mul)
from src.hierarchy import (check_dependency_graph, dependency_graph, expand_pi_minus,
                           restricted_graph_agrees, term_bookkeeping_holds)
from src.multiindex import (Multiindex, StructureParams, bracket, classify_degree_two,
                            discounted_homogeneity, enumerate_populated, homogeneity,
                            is_populated, is_special_form, n_vectors_up_to, order, order_value,
                            pi_may_be_nonzero, validate_genericity)
from src.recentering import (GammaEntryQuery, check_model_axioms, dgamma_apply, gamma_apply,
                             gamma_dependencies, gamma_entry, gamma_entry_recursive, random_dpi_spec,
                             random_population_spec)
from src.utils import parallel_map, seed_override

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckResult:
    suite: str
    property: str
    lemma: str
    status: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return asdict(self)


def _result(suite: str, prop: str, lemma: str, failures: List[str], checked: int) -> CheckResult:
    if failures:
        detail = f"{len(failures)} of {checked} failed; first: {failures[0]}"
        logger.warning(f"[{suite}] {prop}: {detail}")
        return CheckResult(suite, prop, lemma, FAIL, detail)
    return CheckResult(suite, prop, lemma, PASS, f"{checked} checked")


def _guarded(suite: str, prop: str, lemma: str, body: Callable[[], tuple]) -> CheckResult:
    """Run body() -> (failures, checked); an InternalInconsistency counts as a failure."""
    try:
        failures, checked = body()
    except InternalInconsistency as e:
        return CheckResult(suite, prop, lemma, FAIL, str(e))
    return _result(suite, prop, lemma, failures, checked)


def _sample_pairs(pool: Sequence[Multiindex], rng: np.random.Generator, count: int):
    if not pool:
        return []
    idx = rng.integers(0, len(pool), size=(count, 2))
    return [(pool[i], pool[j]) for i, j in idx]


def _random_series(params: StructureParams, pool: Sequence[Multiindex], rng: np.random.Generator,
                   size: int = 4) -> FormalSeries:
    terms = {}
    for _ in range(size):
        beta = pool[int(rng.integers(len(pool)))]
        terms[beta] = terms.get(beta, 0) + sp.Rational(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    return FormalSeries(params, terms)


# ---------------------------------------------------------------------------
# multiindex
# ---------------------------------------------------------------------------

def multiindex_suite(params: StructureParams, max_order, rng: np.random.Generator, jobs: int = 1,
                     settings: dict = CHECK_SETTINGS) -> List[CheckResult]:
    suite = "multiindex"
    results = []
    pool = enumerate_populated(max_order, params, jobs=jobs)
    empty = Multiindex.empty()
    zero_hom = homogeneity(empty, params)
    zero_disc = discounted_homogeneity(empty, params)
    zero_ord = order(empty, params)

    def finiteness():
        wider = enumerate_populated(max_order, params, jobs=jobs, bound_factor=2)
        failures = [] if wider == pool else [f"bound_factor=2 changed the set ({len(wider)} vs {len(pool)})"]
        keys = [(order_value(b, params), b.sort_key()) for b in pool]
        if keys != sorted(keys):
            failures.append("enumeration is not sorted by (order, key)")
        return failures, len(pool)

    results.append(_guarded(suite, "enumeration is finite, complete and sorted",
                            "finitely many populated indices below any order", finiteness))

    pairs = _sample_pairs(pool, rng, settings['additivity_pairs'])

    def additivity():
        failures = []
        for b, g in pairs:
            s = b + g
            if homogeneity(s, params) - zero_hom != (homogeneity(b, params) - zero_hom) + (homogeneity(g, params) - zero_hom):
                failures.append(f"|.|-|0| not additive on {b}, {g}")
            if discounted_homogeneity(s, params) - zero_disc != \
                    (discounted_homogeneity(b, params) - zero_disc) + (discounted_homogeneity(g, params) - zero_disc):
                failures.append(f"<.>-<0> not additive on {b}, {g}")
            if order(s, params) - zero_ord != (order(b, params) - zero_ord) + (order(g, params) - zero_ord):
                failures.append(f"|.|_< - |0|_< not additive on {b}, {g}")
        return failures, len(pairs)

    results.append(_guarded(suite, "additivity of |.|-|0|, <.>-<0>, |.|_< - |0|_<",
                            "homogeneity and order properties", additivity))

    def positivity():
        failures = []
        for b in pool:
            if b.is_empty:
                continue
            for name, form, zero in (("|.|", homogeneity(b, params), zero_hom),
                                     ("<.>", discounted_homogeneity(b, params), zero_disc)):
                if not (form - zero).evaluate(params) > 0:
                    failures.append(f"{name}({b}) - {name}(0) is not > 0")
        return failures, len(pool)

    results.append(_guarded(suite, "|beta| > |0| and <beta> > <0> for beta != 0",
                            "homogeneity properties", positivity))

    def order_bounds():
        failures = []
        lower = params.alpha + params.half_D
        floor = zero_ord.evaluate(params)
        for b in pool:
            ordb = order_value(b, params)
            hom = homogeneity(b, params).evaluate(params)
            if ordb < hom:
                failures.append(f"|{b}|_< < |{b}| on a populated index")
            if bracket(b) >= 0:
                if not ordb >= hom + params.half_D >= lower:
                    failures.append(f"|{b}|_< >= |{b}| + D/2 >= alpha + D/2 fails")
                if not b.is_empty and not ordb > floor:
                    failures.append(f"|{b}|_< is not above |0|_<")
        return failures, len(pool)

    results.append(_guarded(suite, "order bounds on populated and [beta] >= 0 indices",
                            "order properties", order_bounds))

    def e0_minimal():
        e0 = Multiindex.unit_n(params.zero_n())
        floor = order_value(e0, params)
        failures = [f"{b} is populated below e_0" for b in pool if order_value(b, params) < floor]
        return failures, len(pool)

    results.append(_guarded(suite, "e_0 precedes every populated index", "legal induction", e0_minimal))

    def genericity():
        validate_genericity(params, max(Fraction(max_order), GENERICITY_CUTOFF))
        return [], 1

    results.append(_guarded(suite, "genericity of alpha and kappa", "choice of kappa", genericity))

    def degree_two():
        found = classify_degree_two(max_order, params)
        return [], len(found)

    results.append(_guarded(suite, "homogeneity-2 indices are e_n (|n|=2) or f_k + kmin e_0",
                            "classification of degree two", degree_two))
    return results


# ---------------------------------------------------------------------------
# formal series
# ---------------------------------------------------------------------------

def series_suite(params: StructureParams, max_order, rng: np.random.Generator,
                 settings: dict = CHECK_SETTINGS) -> List[CheckResult]:
    suite = "series"
    pool = enumerate_populated(max_order, params)
    tilde = [b for b in pool if bracket(b) >= 0]
    count = settings['random_series']
    cutoff = Fraction(max_order)
    triples = [(_random_series(params, pool, rng), _random_series(params, pool, rng),
                _random_series(params, pool, rng)) for _ in range(count)]
    results = []

    def ring():
        failures = []
        for a, b, c in triples:
            if series_mul(series_mul(a, b), c) != series_mul(a, series_mul(b, c)):
                failures.append("associativity")
            if series_mul(a, b) != series_mul(b, a):
                failures.append("commutativity")
            if series_mul(a, b + c) != series_mul(a, b) + series_mul(a, c):
                failures.append("distributivity")
        return failures, len(triples)

    results.append(_guarded(suite, "commutative ring axioms", "formal power series ring", ring))

    def coherence():
        failures = []
        for _ in range(count):
            a = _random_series(params, tilde, rng)
            b = _random_series(params, tilde, rng)
            lhs = series_mul(a, b).truncate(cutoff)
            rhs = series_mul(a.truncate(cutoff), b.truncate(cutoff))
            if lhs != rhs:
                failures.append(f"truncate(a*b) != truncate(a)*truncate(b) at {cutoff}")
        return failures, count

    results.append(_guarded(suite, "truncation commutes with products on T~", "order additivity", coherence))

    vectors = n_vectors_up_to(params.d, 2)

    def leibniz():
        failures = []
        for a, b, _ in triples:
            n = vectors[int(rng.integers(len(vectors)))]
            lhs = series_derivative(series_mul(a, b), n)
            rhs = series_mul(series_derivative(a, n), b) + series_mul(a, series_derivative(b, n))
            if lhs != rhs:
                failures.append(f"Leibniz rule for D^{n}")
        return failures, len(triples)

    results.append(_guarded(suite, "D^n is a derivation", "derivatives of formal series", leibniz))

    def derivative_lands_in_tilde():
        failures = []
        for a, _, _ in triples:
            for n in vectors:
                d = series_derivative(project_T(a), n)
                if d != project_Ttilde(d):
                    failures.append(f"D^{n} maps a T-series outside T~")
        return failures, len(triples) * len(vectors)

    results.append(_guarded(suite, "D^n T is contained in T~", "mapping properties", derivative_lands_in_tilde))
    return results


# ---------------------------------------------------------------------------
# recentering
# ---------------------------------------------------------------------------

def _recentering_case(task) -> List[str]:
    """All recentering properties for one random spec; module level for worker processes."""
    params, max_order, seed, settings = task
    rng = np.random.default_rng(seed)
    pool = enumerate_populated(max_order, params)
    spec = random_population_spec(params, rng, int(rng.integers(1, settings['spec_max_entries'] + 1)),
                                  max_order, pool)
    failures = []
    columns = [pool[int(i)] for i in rng.integers(0, len(pool), size=3)]
    for gamma in columns:
        image = spec.engine().monomial_image(gamma)
        # every row, including those off the image support
        for beta in pool:
            q = GammaEntryQuery(beta, gamma)
            coeff = image.coefficient(beta)
            if not coeff_is_zero(coeff - gamma_entry(spec, q)):
                failures.append(f"series image and exponential formula differ at ({beta}|{gamma})")
            if not coeff_is_zero(coeff - gamma_entry_recursive(spec, q)):
                failures.append(f"recursive oracle differs at ({beta}|{gamma})")
        for beta in image.terms:
            if beta == gamma:
                continue
            if not homogeneity(gamma, params).evaluate(params) < homogeneity(beta, params).evaluate(params):
                failures.append(f"(Gamma - id)_{beta}^{gamma} != 0 but |gamma| >= |beta|")
            if not discounted_homogeneity(gamma, params).evaluate(params) \
                    < discounted_homogeneity(beta, params).evaluate(params):
                failures.append(f"(Gamma - id)_{beta}^{gamma} != 0 but <gamma> >= <beta>")
            if order_value(gamma, params) >= order_value(beta, params):
                failures.append(f"(Gamma - id)_{beta}^{gamma} != 0 but gamma is not below beta")
            if bracket(gamma) >= 0 and bracket(beta) < 0:
                failures.append(f"Gamma maps z^{gamma} in T~ to {beta} outside T~")
            if is_populated(gamma, params) and not is_populated(beta, params):
                failures.append(f"Gamma maps z^{gamma} in T to {beta} outside T")
        if is_populated(gamma, params) and not gamma.is_purely_polynomial:
            for beta in image.terms:
                for n, b_dep in gamma_dependencies(spec, beta, gamma):
                    if order_value(b_dep, params) >= order_value(beta, params):
                        failures.append(f"Gamma_{beta}^{gamma} depends on pi^({n})_{b_dep} not strictly below beta")

    if params.pbar is not None:
        dspec = random_dpi_spec(params, rng, int(rng.integers(1, settings['spec_max_entries'] + 1)),
                                max_order, pool)
        bound = Fraction(params.D) / params.pbar
        for gamma in columns:
            image = dgamma_apply(spec, dspec, FormalSeries.monomial(params, gamma))
            for beta in image.terms:
                if not order_value(gamma, params) < order_value(beta, params):
                    failures.append(f"dGamma_{beta}^{gamma} != 0 but gamma is not below beta")
                if not homogeneity(gamma, params).evaluate(params) < homogeneity(beta, params).evaluate(params) + bound:
                    failures.append(f"dGamma_{beta}^{gamma} != 0 but |gamma| >= |beta| + D/pbar")
                if not discounted_homogeneity(gamma, params).evaluate(params) \
                        < discounted_homogeneity(beta, params).evaluate(params) + bound:
                    failures.append(f"dGamma_{beta}^{gamma} != 0 but <gamma> >= <beta> + D/pbar")
                if is_populated(gamma, params) and bracket(beta) < 0:
                    failures.append(f"dGamma maps z^{gamma} in T outside T~")
        a = FormalSeries(params, {columns[0]: 1, columns[1]: 2})
        b = FormalSeries(params, {columns[2]: 1})
        lhs = dgamma_apply(spec, dspec, series_mul(a, b))
        rhs = series_mul(dgamma_apply(spec, dspec, a), gamma_apply(spec, b)) \
            + series_mul(gamma_apply(spec, a), dgamma_apply(spec, dspec, b))
        if lhs != rhs:
            failures.append("dGamma(ab) != dGamma(a) Gamma(b) + Gamma(a) dGamma(b)")
        lhs = gamma_apply(spec, series_mul(a, b))
        rhs = series_mul(gamma_apply(spec, a), gamma_apply(spec, b))
        if lhs != rhs:
            failures.append("Gamma(ab) != Gamma(a) Gamma(b)")
    return failures


def recentering_suite(params: StructureParams, max_order, rng: np.random.Generator, jobs: int = 1,
                      settings: dict = CHECK_SETTINGS) -> List[CheckResult]:
    suite = "recentering"
    results = []
    seeds = [int(s) for s in rng.integers(0, 2 ** 31, size=settings['random_specs'])]
    tasks = [(params, max_order, s, settings) for s in seeds]

    def random_specs():
        failures = []
        for chunk in parallel_map(_recentering_case, tasks, jobs):
            failures.extend(chunk)
        return failures, len(tasks)

    results.append(_guarded(suite, "Gamma/dGamma triangularity, mapping sets, oracle equivalence",
                            "definition and triangularity of Gamma and dGamma", random_specs))

    def model_axioms():
        failures = []
        checked = 0
        for _ in range(settings['polynomial_point_triples']):
            points = [tuple(Fraction(int(v), int(w)) for v, w in
                            zip(rng.integers(-5, 6, size=params.d + 1), rng.integers(1, 4, size=params.d + 1)))
                      for _ in range(3)]
            for row in check_model_axioms(params, *points, max_degree=settings['polynomial_max_degree']):
                checked += 1
                if row['status'] != PASS:
                    failures.append(f"{row['axiom']}: {row.get('counterexample', '')}")
        return failures, checked

    results.append(_guarded(suite, "model axioms on the polynomial sector", "algebraic model axioms",
                            model_axioms))
    return results


# ---------------------------------------------------------------------------
# hierarchy
# ---------------------------------------------------------------------------

def hierarchy_suite(params: StructureParams, max_order, jobs: int = 1) -> List[CheckResult]:
    suite = "hierarchy"
    results = []
    pool = enumerate_populated(max_order, params, jobs=jobs)

    def population():
        failures = []
        for b in pool:
            expr = expand_pi_minus(b, params)
            live = bracket(b) >= 0 or is_special_form(b, params)
            if not expr.is_zero and not live:
                failures.append(f"Pi^-[{b}] = {expr.to_text()} on an index that must vanish")
        return failures, len(pool)

    results.append(_guarded(suite, "Pi^- vanishes unless [beta] >= 0 or special form",
                            "population of the model", population))

    def terms():
        failures = []
        checked = 0
        for b in pool:
            for t in expand_pi_minus(b, params).terms:
                checked += 1
                if not term_bookkeeping_holds(t, b, params):
                    failures.append(f"homogeneity bookkeeping fails in Pi^-[{b}]: {t.to_text()}")
                if t.counterterm is not None and (t.counterterm.k % 2 == 0
                                                  or t.counterterm.beta.has_polynomial_part):
                    failures.append(f"counterterm {t.counterterm.label()} in Pi^-[{b}] has wrong parity or support")
                if t.xi and not b.is_empty:
                    failures.append(f"xi in Pi^-[{b}]")
                if t.taylor is not None and b.k_count_above(params.kmin) == 0:
                    failures.append(f"Taylor remainder in Pi^-[{b}] without k > kmin")
                for f in t.pi_factors:
                    if not pi_may_be_nonzero(f) or order_value(f, params) >= order_value(b, params):
                        failures.append(f"Pi[{f}] in Pi^-[{b}] is not a lower populated index")
        return failures, checked

    results.append(_guarded(suite, "term bookkeeping, counterterm parity, strict descent of factors",
                            "dependence of Pi", terms))

    def graphs():
        checked = 0
        for b in pool:
            if b.is_purely_polynomial:
                continue
            check_dependency_graph(dependency_graph(b, params), params)
            checked += 1
        return [], checked

    results.append(_guarded(suite, "dependency DAG is acyclic and descends in order",
                            "dependence of Pi", graphs))

    def restricted():
        failures = []
        members = [b for b in pool if b.k_count_above(params.kmin) == 0 and not b.is_purely_polynomial]
        for b in members:
            if not restricted_graph_agrees(b, params):
                failures.append(f"graph of {b} changes when k-slots collapse to {{kmin}}")
        return failures, len(members)

    results.append(_guarded(suite, "restriction to k = kmin commutes with the graph",
                            "restriction to the limiting equation", restricted))

    def degree_two():
        failures = []
        zero = params.zero_n()
        members = [b for b in pool if len(b.kpart) == 1 and b.kpart[0][1] == 1
                   and b.npart == ((zero, params.kmin),)]
        for b in members:
            k = b.kpart[0][0]
            expr = expand_pi_minus(b, params)
            ok = len(expr.terms) == 1 and expr.terms[0].coefficient == math.comb(k, params.kmin) \
                and expr.terms[0].w_index == k - params.kmin and not expr.terms[0].pi_factors \
                and expr.terms[0].counterterm is None and expr.terms[0].taylor is None
            if not ok:
                failures.append(f"Pi^-[{b}] = {expr.to_text()}")
        return failures, len(members)

    results.append(_guarded(suite, "Pi^- of f_k + kmin e_0 is a single W term",
                            "classification of degree two", degree_two))
    return results


# ---------------------------------------------------------------------------
# appell
# ---------------------------------------------------------------------------

def _random_moments(rng: np.random.Generator, K: int) -> MomentSequence:
    return MomentSequence(tuple([Fraction(1)] + [Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
                                                 for _ in range(K)]))


def appell_suite(params: StructureParams, max_order, rng: np.random.Generator,
                 settings: dict = CHECK_SETTINGS) -> List[CheckResult]:
    suite = "appell"
    K = settings['appell_max_degree']
    sequences = [_random_moments(rng, K) for _ in range(settings['moment_sequences'])]
    results = []

    def appell_law():
        failures = []
        for m in sequences:
            seq = AppellSequence(m)
            for k in range(1, K + 1):
                w = seq.polynomial(k)
                lower = seq.polynomial(k - 1)
                if not w.is_monic:
                    failures.append(f"W_{k} is not monic")
                if any(not coeff_is_zero(a - k * b) for a, b in zip(w.derivative().coefficients, lower.coefficients)):
                    failures.append(f"W_{k}' != {k} W_{k - 1} for m = {m.m}")
                if not coeff_is_zero(seq.centredness_residual(k)):
                    failures.append(f"E[W_{k}(Z)] != 0 for m = {m.m}")
        return failures, len(sequences) * K

    results.append(_guarded(suite, "Appell law, monicity and centredness identity",
                            "Appell sequences have mean zero", appell_law))

    def gaussian():
        failures = []
        for sigma2 in (Fraction(1), Fraction(1, 2), Fraction(7, 3)):
            m = gaussian_moments(sigma2, K)
            for k in range(K + 1):
                w = appell_from_moments(m, k)
                h = hermite(k, sigma2)
                if any(not coeff_is_zero(a - b) for a, b in zip(w.coefficients, h.coefficients)):
                    failures.append(f"W_{k} != H_{k} at sigma2 = {sigma2}")
        return failures, 3 * (K + 1)

    results.append(_guarded(suite, "Gaussian moments give Hermite polynomials", "Gaussian noise",
                            gaussian))

    def rescaling():
        failures = []
        for m in sequences[:10]:
            for eps in (Fraction(1, 2), Fraction(1, 3)):
                rescaled = rescale_moments(m, params.alpha, eps)
                for k in range(K + 1):
                    lhs = appell_rescale(appell_from_moments(m, k), params.alpha, eps)
                    rhs = appell_from_moments(rescaled, k)
                    if any(sp.simplify(a - b) != 0 for a, b in zip(lhs.coefficients, rhs.coefficients)):
                        failures.append(f"rescaled W_{k} disagrees with W_{k} of rescaled moments (eps={eps})")
        return failures, 20 * (K + 1)

    results.append(_guarded(suite, "rescaling commutes with building from moments",
                            "rescaled Appell polynomials", rescaling))

    pool = [b for b in enumerate_populated(max_order, params) if not b.is_empty]

    def composition():
        failures = []
        checked = 0
        kmax = settings['composition_max_degree']
        seq = AppellSequence(sequences[0], kmax) if sequences else AppellSequence(gaussian_moments(1, kmax))
        for _ in range(10):
            size = int(rng.integers(1, settings['composition_max_support'] + 1))
            pi = _random_series(params, pool, rng, size) + FormalSeries.monomial(params, Multiindex.empty(), PI0)
            for k in range(kmax + 1):
                checked += 1
                fast = substitute_appell(compose_faa_di_bruno(k, pi, seq, max_order), seq)
                slow = compose_brute_force(k, pi, seq, max_order)
                if fast != slow:
                    failures.append(f"Faa di Bruno and brute force differ for k={k}")
        return failures, checked

    results.append(_guarded(suite, "Faa di Bruno composition matches brute force",
                            "composition with Appell polynomials", composition))
    return results


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def simulation_suite(report: dict) -> List[CheckResult]:
    """Judge a run_simulation report against the law-level contracts."""
    suite = "simulation"
    results = []
    slope = report['slopeFit']
    ok = abs(slope['slope'] - slope['expected']) <= 0.15
    results.append(_result(suite, "spectral slope within 0.15 of -2s", "Gaussian noise",
                           [] if ok else [f"slope {slope['slope']:.3f}, expected {slope['expected']:.3f}"], 1))
    bad = [f"k={row['k']} z={row['z']:.2f}" for row in report['centredness'] if abs(row['z']) >= 3]
    results.append(_result(suite, "E[W_k(Z)] = 0 on split samples (|z| < 3)",
                           "Appell sequences have mean zero", bad, len(report['centredness'])))
    bad = [f"eps={row['eps']} deviation={row['deviation']:.2f}" for row in report['varianceScaling']
           if abs(row['deviation']) >= 3]
    results.append(_result(suite, "Var(Z_eps)/Var(Z) = eps^(2 alpha)", "rescaled noise", bad,
                           len(report['varianceScaling'])))
    bad = [f"k={row['k']} j={row['j']} z={row['z']:.2f}" for row in report['hermite'] if abs(row['z']) >= 3]
    results.append(_result(suite, "empirical Appell coefficients match Hermite", "Gaussian noise",
                           bad, len(report['hermite'])))
    moments = {row['j']: row for row in report['moments']}
    bad = []
    if 3 in moments and abs(moments[3]['value']) >= 3 * max(moments[3]['stderr'], 1e-300):
        bad.append(f"m3 = {moments[3]['value']:.4f}")
    results.append(_result(suite, "odd moments vanish within 3 SE", "symmetric noise", bad, 1))
    return results


SUITES = ('multiindex', 'series', 'recentering', 'hierarchy', 'appell')


def run_checks(params: StructureParams, max_order, jobs: int = 1, with_sim: bool = False,
               sim_report: Optional[dict] = None, settings: dict = CHECK_SETTINGS) -> List[CheckResult]:
    """Every suite in order; the simulation suite only when asked for."""
    rng = np.random.default_rng(seed_override(settings['seed']))
    results = []
    results.extend(multiindex_suite(params, max_order, rng, jobs, settings))
    results.extend(series_suite(params, max_order, rng, settings))
    results.extend(recentering_suite(params, max_order, rng, jobs, settings))
    results.extend(hierarchy_suite(params, max_order, jobs))
    results.extend(appell_suite(params, max_order, rng, settings))
    if with_sim:
        if sim_report is None:
            from src.noise_sim import RunSettings, SimConfig, run_simulation
            sim_report = run_simulation(SimConfig.from_dict(), RunSettings())
        results.extend(simulation_suite(sim_report))
    logger.info(f"run_checks: {sum(r.passed for r in results)}/{len(results)} properties passed")
    return results


def format_table(results: Sequence[CheckResult]) -> str:
    headers = ("suite", "property", "lemma", "status", "detail")
    rows = [(r.suite, r.property, r.lemma, r.status, r.detail) for r in results]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = [" | ".join(h.ljust(w) for h, w in zip(headers, widths)),
             "-+-".join("-" * w for w in widths)]
    lines.extend(" | ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows)
    return "\n".join(lines) + "\n"
