"""Command-line entry point: `mirs <command> [options]`.

Subcommand handlers are registered in `_command_handlers`; every handler takes
the parsed namespace and returns an exit code. Command output goes to stdout,
diagnostics to the logger (stderr and the session log).
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import sympy as sp

from src.appell import AppellSequence, appell_from_moments, appell_rescale, hermite
from src.checks import format_table, run_checks
from src.config import DEFAULT_SIM_CONFIG, DEFAULT_SIM_RUN, ERROR_MESSAGES, EXIT_CODES, GENERICITY_CUTOFF
from src.errors import InternalInconsistency, NonGenericParameters, ValidationError
from src.formal_series import coeff_is_zero
from src.graph_view import to_dot, to_html
from src.hierarchy import dependency_graph, expand_pi_minus, induction_order, list_counterterms
from src.json_format import (decode_dpispec, decode_gamma_query, decode_moments, decode_multiindex,
                             decode_params, decode_pispec, encode_appell_polynomial, encode_coefficient, encode_graph,
                             encode_linear_form, encode_multiindex, encode_params)
from src.logging_setup import get_logger, rotate_logs, set_console_level
from src.multiindex import (StructureParams, bracket, classify_degree_two, discounted_homogeneity,
                            enumerate_populated, homogeneity, is_populated, order, validate_genericity)
from src.recentering import (GammaEntryQuery, dgamma_dependencies, dgamma_entry, gamma_dependencies,
                             gamma_entry, gamma_entry_recursive)
from src.storage import dumps, load_json, save_json
from src.utils import format_rational, handle_error, parse_rational, require_payload

logger = logging.getLogger(__name__)

PROG = "mirs"

# Registry of subcommand handlers
_command_handlers: Dict[str, Callable[[argparse.Namespace], int]] = {}


def register_command(name: str, handler_func: Callable[[argparse.Namespace], int]):
    """Register the handler for a subcommand."""
    _command_handlers[name] = handler_func


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(data: Any):
    sys.stdout.write(dumps(data))


def _load_arg(value: str, where: str) -> Any:
    """A JSON argument given inline ('{...}') or as a file path."""
    if value.lstrip().startswith(('{', '[')):
        try:
            return json.loads(value)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{where}: invalid inline JSON: {e}")
    return load_json(value)


def _params(args) -> StructureParams:
    payload = _load_arg(args.params, "params") if args.params else None
    return decode_params(payload)


def _generic_params(args, max_order=None) -> StructureParams:
    params = _params(args)
    cutoff = Fraction(GENERICITY_CUTOFF) if max_order is None else max(max_order, Fraction(GENERICITY_CUTOFF))
    validate_genericity(params, cutoff)
    return params


def _max_order(args) -> Fraction:
    return parse_rational(args.max_order, "--max-order")


def _beta(args, params: StructureParams, attr: str = 'beta'):
    return decode_multiindex(_load_arg(getattr(args, attr), attr), params, attr)


def _index_row(beta, params: StructureParams) -> dict:
    return {
        'beta': encode_multiindex(beta),
        'text': str(beta),
        'order': format_rational(order(beta, params).evaluate(params)),
        'homogeneity': encode_linear_form(homogeneity(beta, params)),
    }


def _index_lines(betas, params: StructureParams) -> str:
    lines = [f"{format_rational(order(b, params).evaluate(params))}\t{b}\t{homogeneity(b, params)}"
             for b in betas]
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def handle_index(args) -> int:
    params = _generic_params(args)
    beta = _beta(args, params)
    quantity = args.quantity
    forms = {
        'homog': homogeneity,
        'order': order,
        'discounted': discounted_homogeneity,
    }
    if quantity in forms:
        form = forms[quantity](beta, params)
        value: Any = format_rational(form.evaluate(params))
        payload = {'quantity': quantity, 'beta': encode_multiindex(beta),
                   'form': encode_linear_form(form), 'value': value}
        text = f"{form} = {value}"
    elif quantity == 'bracket':
        value = bracket(beta)
        payload = {'quantity': quantity, 'beta': encode_multiindex(beta), 'value': value}
        text = str(value)
    else:
        value = is_populated(beta, params)
        payload = {'quantity': quantity, 'beta': encode_multiindex(beta), 'value': value}
        text = "true" if value else "false"
    if args.format == 'text':
        _emit(text)
    else:
        _emit_json(payload)
    return EXIT_CODES['ok']


def handle_enumerate(args) -> int:
    R = _max_order(args)
    params = _generic_params(args, R)
    hom = None if args.max_homogeneity is None else parse_rational(args.max_homogeneity, "--max-homogeneity")
    betas = enumerate_populated(R, params, max_homogeneity=hom, jobs=args.jobs)
    if args.format == 'text':
        sys.stdout.write(_index_lines(betas, params))
    else:
        _emit_json({'maxOrder': format_rational(R), 'count': len(betas),
                    'indices': [_index_row(b, params) for b in betas]})
    return EXIT_CODES['ok']


def handle_classify_two(args) -> int:
    R = _max_order(args)
    params = _generic_params(args, R)
    betas = classify_degree_two(R, params)
    if args.format == 'text':
        sys.stdout.write(_index_lines(betas, params))
    else:
        _emit_json({'maxOrder': format_rational(R), 'count': len(betas),
                    'indices': [_index_row(b, params) for b in betas]})
    return EXIT_CODES['ok']


def _dep_keys(keys) -> List[dict]:
    rows = [{'n': list(n), 'beta': encode_multiindex(b), 'text': f"({','.join(map(str, n))}|{b})"}
            for n, b in keys]
    return sorted(rows, key=lambda r: r['text'])


def handle_gamma(args) -> int:
    params = _generic_params(args)
    spec = decode_pispec(_load_arg(args.pi_spec, "pi-spec"), params, "pi-spec")
    query_payload = {'beta': _load_arg(args.beta, "beta"), 'gamma': _load_arg(args.gamma, "gamma")}
    if args.cutoff is not None:
        query_payload['cutoff'] = args.cutoff
    q: GammaEntryQuery = decode_gamma_query(query_payload, params)

    entry = gamma_entry_recursive(spec, q) if args.recursive else gamma_entry(spec, q)
    payload = {'beta': encode_multiindex(q.beta), 'gamma': encode_multiindex(q.gamma),
               'gamma_entry': encode_coefficient(entry), 'text': str(entry)}
    lines = [f"Gamma[{q.beta}|{q.gamma}] = {entry}"]
    if args.deps:
        deps = gamma_dependencies(spec, q.beta, q.gamma)
        payload['dependencies'] = _dep_keys(deps)
        lines.append("depends on: " + ", ".join(d['text'] for d in payload['dependencies']))

    if args.dgamma:
        dspec = decode_dpispec(_load_arg(args.dgamma, "dgamma"), params, "dgamma")
        dentry = dgamma_entry(spec, dspec, q)
        payload['dgamma_entry'] = encode_coefficient(dentry)
        payload['dgamma_text'] = str(dentry)
        lines.append(f"dGamma[{q.beta}|{q.gamma}] = {dentry}")
        if args.deps:
            pis, dpis = dgamma_dependencies(spec, dspec, q.beta, q.gamma)
            payload['dgamma_dependencies'] = {'pi': _dep_keys(pis), 'dpi': _dep_keys(dpis)}

    if args.format == 'text':
        _emit("\n".join(lines))
    else:
        _emit_json(payload)
    return EXIT_CODES['ok']


def handle_pi_minus(args) -> int:
    params = _generic_params(args)
    beta = _beta(args, params)
    expr = expand_pi_minus(beta, params)
    if args.format == 'text':
        _emit(f"Pi^-[{beta}] = {expr.to_text()}")
    elif args.format == 'json-ast':
        _emit_json(expr.to_ast())
    else:
        _emit_json({'beta': encode_multiindex(beta), 'text': expr.to_text(), 'sympy': str(expr.to_sympy())})
    return EXIT_CODES['ok']


def handle_counterterms(args) -> int:
    R = _max_order(args)
    params = _generic_params(args, R)
    keys = list_counterterms(R, params)
    if args.format == 'text':
        _emit("\n".join(k.label() for k in keys) if keys else "")
    else:
        _emit_json({'maxOrder': format_rational(R),
                    'counterterms': [{'k': k.k, 'beta': encode_multiindex(k.beta), 'label': k.label()}
                                     for k in keys]})
    return EXIT_CODES['ok']


def handle_deps(args) -> int:
    params = _generic_params(args)
    beta = _beta(args, params)
    graph = dependency_graph(beta, params)
    order_list = induction_order(graph)
    if args.html:
        to_html(graph, args.html)
    if args.dot:
        sys.stdout.write(to_dot(graph))
    elif args.format == 'text':
        lines = []
        for node in order_list:
            data = graph.nodes[node]
            deps = sorted(graph.nodes[v]['label'] for _, v, d in graph.out_edges(node, data=True)
                          if d['relation'] == 'depends')
            lines.append(f"{format_rational(data['level'])}\t{data['label']}\t{', '.join(deps)}")
        _emit("\n".join(lines))
    else:
        _emit_json(encode_graph(graph, order_list))
    return EXIT_CODES['ok']


def handle_appell(args) -> int:
    moments = decode_moments(_load_arg(args.moments, "moments"))
    k = args.k
    w = appell_from_moments(moments, k)
    payload = {'k': k, 'moments': [str(v) for v in moments.m], 'polynomial': encode_appell_polynomial(w),
               'centredness_residual': str(AppellSequence(moments, k).centredness_residual(k))}
    lines = [f"W{k}(phi) = {w}"]
    status = EXIT_CODES['ok']

    if (args.alpha is None) != (args.eps is None):
        raise ValidationError("--alpha and --eps must be given together")
    if args.alpha is not None:
        alpha = parse_rational(args.alpha, "--alpha")
        eps = parse_rational(args.eps, "--eps")
        rescaled = appell_rescale(w, alpha, eps)
        payload['rescaled'] = encode_appell_polynomial(rescaled)
        lines.append(f"W{k},eps(phi) = {rescaled}")

    if args.check_hermite:
        if args.sigma2 is None:
            raise ValidationError("--check-hermite needs --sigma2")
        sigma2 = parse_rational(args.sigma2, "--sigma2")
        h = hermite(k, sigma2)
        match = all(coeff_is_zero(sp.sympify(a) - b) for a, b in zip(w.coefficients, h.coefficients))
        payload['hermite'] = encode_appell_polynomial(h)
        payload['hermite_match'] = match
        lines.append(f"H{k}(phi; {format_rational(sigma2)}) = {h}  [{'match' if match else 'MISMATCH'}]")
        if not match:
            logger.warning(f"W_{k} differs from the Hermite polynomial with variance {sigma2}")
            status = EXIT_CODES['property_failure']

    if args.format == 'text':
        _emit("\n".join(lines))
    else:
        _emit_json(payload)
    return status


def _sim_inputs(path: Optional[str]):
    from src.noise_sim import RunSettings, SimConfig
    payload = _load_arg(path, "config") if path else {}
    payload = require_payload(payload, "config", allowed_fields=list(DEFAULT_SIM_CONFIG) + ['run'],
                              field_types={'run': dict, 'dsim': int, 'grid_t': int, 'grid_x': int,
                                           'seed': int, 's': (int, float), 'dt': (int, float),
                                           'dx': (int, float), 'cutoff_rho': (int, float)})
    run_payload = require_payload(payload.pop('run', None) or {}, "config.run",
                                  allowed_fields=DEFAULT_SIM_RUN.keys())
    try:
        return SimConfig.from_dict(payload), RunSettings.from_dict(run_payload)
    except TypeError as e:
        raise ValidationError(f"config: {e}")


def handle_simulate(args) -> int:
    from src.noise_sim import run_simulation
    cfg, run = _sim_inputs(args.config)
    report = run_simulation(cfg, run, dump_dir=args.dump_dir)
    if args.out:
        save_json(report, args.out)
        logger.info(f"Simulation report written to {args.out}")
    if args.format == 'text':
        slope = report['slopeFit']
        lines = [f"slope {slope['slope']:.4f} +- {slope['stderr']:.4f} (expected {slope['expected']:.4f})"]
        lines.extend(f"m{row['j']} = {row['value']:.6f} +- {row['stderr']:.6f}" for row in report['moments'])
        lines.extend(f"E[W{row['k']}(Z)]: z = {row['z']:.3f}" for row in report['centredness'])
        lines.extend(f"Var ratio at eps={row['eps']}: {row['ratio']:.6f} (expected {row['expected']:.6f})"
                     for row in report['varianceScaling'])
        _emit("\n".join(lines))
    elif not args.out:
        _emit_json(report)
    return EXIT_CODES['ok']


def handle_check(args) -> int:
    R = _max_order(args)
    params = _generic_params(args, R)
    sim_report = None
    if args.with_sim:
        from src.noise_sim import run_simulation
        cfg, run = _sim_inputs(args.sim_config)
        sim_report = run_simulation(cfg, run)
    results = run_checks(params, R, jobs=args.jobs, with_sim=args.with_sim, sim_report=sim_report)
    if args.format == 'text':
        sys.stdout.write(format_table(results))
    else:
        _emit_json({'params': encode_params(params), 'maxOrder': format_rational(R),
                    'results': [r.to_dict() for r in results]})
    failed = [r for r in results if not r.passed]
    if failed:
        logger.error(f"{len(failed)} of {len(results)} properties failed")
        return EXIT_CODES['property_failure']
    return EXIT_CODES['ok']


register_command('index', handle_index)
register_command('enumerate', handle_enumerate)
register_command('classify-two', handle_classify_two)
register_command('gamma', handle_gamma)
register_command('pi-minus', handle_pi_minus)
register_command('counterterms', handle_counterterms)
register_command('deps', handle_deps)
register_command('appell', handle_appell)
register_command('simulate', handle_simulate)
register_command('check', handle_check)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common_parser(formats=('text', 'json')) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--params', help="structure parameters (JSON file or inline JSON)")
    common.add_argument('--format', choices=formats, default='text')
    common.add_argument('--jobs', type=int, default=1, help="worker processes for parallel suites")
    common.add_argument('--log-level', default='WARNING',
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'), help="stderr log level")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()

    parser = argparse.ArgumentParser(prog=PROG, description="Exact algebra of multiindex models and a noise lab")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('index', parents=[common], help="scalar quantities of one multiindex")
    p.add_argument('quantity', choices=('homog', 'order', 'bracket', 'populated', 'discounted'))
    p.add_argument('--beta', required=True)

    p = sub.add_parser('enumerate', parents=[common], help="populated multiindices up to an order")
    p.add_argument('--max-order', required=True)
    p.add_argument('--max-homogeneity')

    p = sub.add_parser('classify-two', parents=[common], help="populated multiindices of homogeneity 2")
    p.add_argument('--max-order', required=True)

    p = sub.add_parser('gamma', parents=[common], help="one entry of Gamma (and dGamma)")
    p.add_argument('--pi-spec', required=True)
    p.add_argument('--beta', required=True)
    p.add_argument('--gamma', required=True)
    p.add_argument('--cutoff')
    p.add_argument('--dgamma', help="dpi spec; also computes the dGamma entry")
    p.add_argument('--recursive', action='store_true', help="use the multiplicative recursion")
    p.add_argument('--deps', action='store_true', help="list the pi entries the entry depends on")

    # json-ast is the term tree; json is the flat text and sympy form
    p = sub.add_parser('pi-minus', parents=[_common_parser(('text', 'json', 'json-ast'))],
                       help="hierarchy expansion of Pi^-")
    p.add_argument('--beta', required=True)

    p = sub.add_parser('counterterms', parents=[common], help="supported counterterms up to an order")
    p.add_argument('--max-order', required=True)

    p = sub.add_parser('deps', parents=[common], help="dependency DAG of Pi^-")
    p.add_argument('--beta', required=True)
    p.add_argument('--dot', action='store_true', help="print the graph in DOT format")
    p.add_argument('--html', help="write an interactive view to this path")

    p = sub.add_parser('appell', parents=[common], help="Appell polynomial of a moment sequence")
    p.add_argument('--moments', required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--sigma2')
    p.add_argument('--check-hermite', action='store_true')
    p.add_argument('--alpha')
    p.add_argument('--eps')

    p = sub.add_parser('simulate', parents=[common], help="Monte-Carlo noise lab")
    p.add_argument('--config')
    p.add_argument('--out')
    p.add_argument('--dump-dir')

    p = sub.add_parser('check', parents=[common], help="run every property suite")
    p.add_argument('--max-order', default=str(GENERICITY_CUTOFF))
    p.add_argument('--with-sim', action='store_true')
    p.add_argument('--sim-config')
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch, and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES['ok'] if e.code in (0, None) else EXIT_CODES['validation']

    get_logger(None, console_level=args.log_level)
    set_console_level(args.log_level)
    rotate_logs()

    handler = _command_handlers.get(args.command)
    if handler is None:
        logger.error(ERROR_MESSAGES['unknown_command'].format(command=args.command))
        return EXIT_CODES['validation']
    logger.info(f"{PROG} {args.command}")
    try:
        return handler(args)
    except ValidationError as e:
        handle_error(e, logger, "Invalid input", log_traceback=False)
        return EXIT_CODES['validation']
    except NonGenericParameters as e:
        handle_error(e, logger, "Non-generic parameters", log_traceback=False)
        return EXIT_CODES['non_generic']
    except InternalInconsistency as e:
        handle_error(e, logger, "Internal inconsistency")
        return EXIT_CODES['property_failure']
    except Exception as e:
        handle_error(e, logger, "Unexpected error")
        return EXIT_CODES['unexpected']
