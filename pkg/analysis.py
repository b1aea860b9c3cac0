"""Analysis pipeline, JSON report assembly and the concurrent batch runner."""

import argparse
import asyncio
import json
import logging
import shlex
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import TOOL_VERSION, WORKERS
from exceptions import (
    InputError,
    NonIsolatedSingularityError,
    NotSemiQuasihomogeneousError,
    SingularityToolError,
    UnderdeterminedWeightsError,
)
from filtration_engine import (
    CertifiedUpTo,
    Cutoffs,
    LevelCertificate,
    ModuleTag,
    WitnessFailure,
    build_piece_table,
    certify_level,
    closed_form_levels,
    default_cutoffs,
    exactness_probe,
    generating_bound,
    milnor_range_dims,
    surjectivity_check,
    top_witness,
)
from graded_jacobian import (
    DegreeIndex,
    alpha_f,
    beta_f,
    critical_locus_is_finite,
    grid_degrees,
    isolated_singularity_check,
    milnor_data,
)
from poly_frontend import (
    ClassificationKind,
    Polynomial,
    WeightSystem,
    classify,
    infer_weights,
    parse_polynomial,
    parse_weights,
    print_polynomial,
)
from residue_pairing import pairing_summary
from spectral_invariants import bfunction, spectral_report
from utils import degree_json, format_rational

logger = logging.getLogger(__name__)

AnalysisReport = Dict[str, Any]


class StrictArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises InputError instead of exiting."""

    def error(self, message: str) -> None:
        raise InputError(message)


@dataclass
class AnalysisRequest:
    expression: str
    weights: Optional[str] = None
    module: ModuleTag = ModuleTag.MPRIME
    max_level: Optional[int] = None
    max_degree: Optional[Fraction] = None
    certify_level: Optional[int] = None


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from e


def add_analysis_options(parser: argparse.ArgumentParser) -> None:
    """Options shared by `analyze` and batch lines."""
    parser.add_argument('--weights', help='Comma-separated rational weights w1,...,wn')
    parser.add_argument('--max-level', type=int, help='Largest Hodge level p to compute')
    parser.add_argument('--max-degree', type=_rational_arg, help='Largest slice degree δ (rational)')
    parser.add_argument('--module', choices=[t.value for t in ModuleTag], default=ModuleTag.MPRIME.value,
                        help='Filtered module to tabulate and certify')
    parser.add_argument('--certify-level', type=int, help='Certify generation at this level instead of the default')


def request_from_args(expression: str, args: argparse.Namespace) -> AnalysisRequest:
    return AnalysisRequest(
        expression=expression,
        weights=args.weights,
        module=ModuleTag(args.module),
        max_level=args.max_level,
        max_degree=args.max_degree,
        certify_level=args.certify_level,
    )


def parse_batch_line(text: str) -> AnalysisRequest:
    """`<expr> [--weights ..] [--module ..]` with shell-style quoting."""
    try:
        tokens = shlex.split(text)
    except ValueError as e:
        raise InputError(f"bad quoting: {e}") from e
    parser = StrictArgumentParser(prog='batch-line', add_help=False)
    parser.add_argument('expression')
    add_analysis_options(parser)
    args = parser.parse_args(tokens)
    return request_from_args(args.expression, args)


def resolve_weights(f: Polynomial, text: Optional[str]) -> Tuple[WeightSystem, str]:
    if text:
        return parse_weights(text, f.n), 'given'
    try:
        return infer_weights(f), 'inferred'
    except UnderdeterminedWeightsError:
        if not critical_locus_is_finite(f):
            raise NonIsolatedSingularityError("critical locus of f is positive-dimensional")
        raise


# --- JSON pieces -------------------------------------------------------------------

def cutoffs_json(cutoffs: Cutoffs) -> Dict[str, Any]:
    return {
        'p_max': cutoffs.p_max,
        'delta_max': format_rational(cutoffs.delta_max),
        'pole_max': cutoffs.pole_max,
    }


def certificate_json(cert: LevelCertificate, w: WeightSystem) -> Dict[str, Any]:
    verdict = cert.verdict
    if isinstance(verdict, CertifiedUpTo):
        body = {'kind': 'CertifiedUpTo', 'cutoffs': cutoffs_json(verdict.cutoffs)}
    elif isinstance(verdict, WitnessFailure):
        body = {
            'kind': 'WitnessFailure',
            'p': verdict.p,
            'delta': degree_json(DegreeIndex.of(verdict.delta, w)),
            'witness': f"{print_polynomial(verdict.witness.numerator)}/f^{verdict.witness.pole_order}",
        }
    else:
        body = {'kind': 'Inconclusive', 'reason': verdict.reason}
    return {'module': cert.module_tag.value, 'bound': cert.bound, 'verdict': body, 'trace': list(cert.trace)}


def _pairing_section(principal: Polynomial, w: WeightSystem, kind: ClassificationKind) -> Dict[str, Any]:
    """Graded pairing data; for semiQH input it is that of the principal part only."""
    degrees = grid_degrees(w, 1, floor(beta_f(w)) + 1)
    degrees = [d for d in degrees if d.is_integer]
    rows = pairing_summary(principal, w, degrees)
    semi = kind == ClassificationKind.SEMIQUASIHOMOGENEOUS
    return {
        'computed_from': 'principal part' if semi else 'input',
        'rows': [
            {'degree': degree_json(r['degree']), 'abar_dim': r['abar_dim'],
             'bbar_dim': r['bbar_dim'], 'perfect': r['perfect']}
            for r in rows
        ],
    }


def _filtration_section(principal: Polynomial, w: WeightSystem, tag: ModuleTag,
                        cutoffs: Cutoffs) -> Dict[str, Any]:
    alpha = alpha_f(w)
    top = beta_f(w)
    k0, k1 = closed_form_levels(w.n, alpha)
    table = build_piece_table(principal, w, tag, cutoffs, delta_limit=top)
    socle = milnor_range_dims(principal, w, floor(top), top)
    return {
        'k0': k0,
        'k1': k1,
        'generating_bound': generating_bound(tag, w.n, alpha),
        'top_witness': top_witness(principal, w),
        'surjective': surjectivity_check(principal, w, top + Fraction(1, w.common_denominator)),
        'top_range': [{'degree': degree_json(d), 'dim': dim} for d, dim in socle.items()],
        'table': {
            'module': tag.value,
            'entries': [
                {'p': p, 'delta': degree_json(delta), 'dim': dim}
                for (p, delta), dim in sorted(table.entries.items())
            ],
        },
    }


def _certificates(f: Polynomial, principal: Polynomial, w: WeightSystem, kind: ClassificationKind,
                  request: AnalysisRequest, cutoffs: Cutoffs) -> Tuple[List[LevelCertificate], Optional[bool]]:
    tag = request.module
    if request.certify_level is not None:
        return [certify_level(f, w, tag, request.certify_level, cutoffs)], None
    if kind == ClassificationKind.QUASIHOMOGENEOUS:
        exactness = exactness_probe(principal, w, tag, cutoffs)
        certs = [exactness.upper] + ([exactness.lower] if exactness.lower is not None else [])
        return certs, exactness.exact
    r = max(generating_bound(tag, w.n, alpha_f(w)) - 1, 0)
    return [certify_level(f, w, tag, r, cutoffs)], None


def analyze(request: AnalysisRequest) -> AnalysisReport:
    """parse -> classify -> milnor -> spectral -> pairing -> filtration -> certificates."""
    started = time.perf_counter()
    f = parse_polynomial(request.expression)
    logger.info(f"Parsed {print_polynomial(f)} in {f.n} variables")
    w, source = resolve_weights(f, request.weights)
    classification = classify(f, w)
    if classification.kind == ClassificationKind.INVALID:
        raise NotSemiQuasihomogeneousError(f"not semiquasihomogeneous: {classification.diagnostics}")
    logger.info(f"Classified as {classification.kind.value} for weights {w}")
    principal = classification.principal
    if not isolated_singularity_check(principal, w):
        raise NonIsolatedSingularityError(
            f"principal part is not an isolated singularity: Jacobian ideal misses degrees above {beta_f(w)}"
        )

    md = milnor_data(principal, w)
    spectral = spectral_report(md)
    cutoffs = default_cutoffs(w, request.max_level, request.max_degree)
    pairing = _pairing_section(principal, w, classification.kind)
    filtration = _filtration_section(principal, w, request.module, cutoffs)
    certificates, exact = _certificates(f, principal, w, classification.kind, request, cutoffs)
    filtration['exact_level'] = exact
    elapsed_ms = int(round((time.perf_counter() - started) * 1000))

    return {
        'input': {
            'expression': request.expression,
            'polynomial': print_polynomial(f),
            'n': f.n,
            'weights': [format_rational(x) for x in w.weights],
            'weights_source': source,
        },
        'classification': {
            'kind': classification.kind.value,
            'principal': print_polynomial(principal),
            'tail': print_polynomial(classification.tail),
            'diagnostics': classification.diagnostics,
        },
        'milnor': {
            'mu': md.mu,
            'exponents': [format_rational(a) for a in md.exponents],
            'per_degree': [
                {'degree': degree_json(d), 'dim': dim}
                for d, dim in sorted(md.per_degree_dims.items()) if dim
            ],
            'bases': {
                format_rational(d.value): [str(m) for m in basis]
                for d, basis in sorted(md.bases.items())
            },
        },
        'spectral': {
            'alpha_f': format_rational(spectral.alpha_f),
            'beta_f': format_rational(spectral.beta_f),
            'bfunction': str(bfunction(md)),
            'b_roots': [format_rational(r) for r in spectral.b_roots],
            'classification': spectral.classification.value,
            'eigenspace_dims': {format_rational(k): v for k, v in spectral.eigenspace_dims.items()},
            'unipotent_hodge_dims': {str(p): d for p, d in spectral.unipotent_hodge_dims.items()},
            'r0': spectral.r0,
            'dim_Ef': spectral.dim_Ef,
            'quotient_generated': spectral.quotient_generated,
        },
        'pairing': pairing,
        'filtration': filtration,
        'certificates': [certificate_json(c, w) for c in certificates],
        'meta': {
            'version': TOOL_VERSION,
            'module': request.module.value,
            'cutoffs': cutoffs_json(cutoffs),
            'elapsed_ms': elapsed_ms,
        },
    }


def report_to_json(report: Dict[str, Any]) -> str:
    return json.dumps(report)


def certified_bound(report: AnalysisReport) -> Optional[int]:
    """Smallest level bound with a CertifiedUpTo verdict in the report."""
    bounds = [c['bound'] for c in report['certificates'] if c['verdict']['kind'] == 'CertifiedUpTo']
    return min(bounds) if bounds else None


# --- batch ----------------------------------------------------------------------------

def read_batch_file(path: str) -> List[Tuple[int, str]]:
    """(line number, text) for every non-blank, non-comment line."""
    try:
        with open(path, encoding='utf-8') as handle:
            raw = handle.read().splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e
    return [(i, line.strip()) for i, line in enumerate(raw, 1)
            if line.strip() and not line.strip().startswith('#')]


def run_batch_line(line_no: int, text: str) -> Tuple[int, Dict[str, Any]]:
    """Analyze one batch line; failures become error records."""
    try:
        return 0, analyze(parse_batch_line(text))
    except SingularityToolError as e:
        logger.error(f"Line {line_no}: {e}")
        return e.exit_code, {'line': line_no, 'input': text, 'error': str(e), 'exit_code': e.exit_code}
    except Exception as e:
        logger.error(f"Line {line_no}: unexpected error: {e}")
        return 3, {'line': line_no, 'input': text, 'error': str(e), 'exit_code': 3}


class BatchRunner:
    """Runs batch lines on an executor and returns results in input order."""

    def __init__(self, workers: int = WORKERS):
        # SHL_WORKERS caps whatever the caller asks for
        self.workers = max(1, min(workers, WORKERS))

    def _executor(self, jobs: int) -> Executor:
        workers = min(self.workers, jobs)
        if workers > 1:
            return ProcessPoolExecutor(max_workers=workers)
        return ThreadPoolExecutor(max_workers=1)

    async def run(self, lines: Sequence[Tuple[int, str]]) -> List[Tuple[int, Dict[str, Any]]]:
        if not lines:
            return []
        loop = asyncio.get_running_loop()
        logger.info(f"Running {len(lines)} batch lines on up to {self.workers} workers")
        with self._executor(len(lines)) as pool:
            futures = [loop.run_in_executor(pool, run_batch_line, no, text) for no, text in lines]
            return list(await asyncio.gather(*futures))


def batch_exit_code(results: Sequence[Tuple[int, Dict[str, Any]]]) -> int:
    return max((code for code, _ in results), default=0)
