import asyncio
import json
from fractions import Fraction

import pytest

from analysis import (
    AnalysisRequest,
    BatchRunner,
    analyze,
    batch_exit_code,
    certified_bound,
    parse_batch_line,
    read_batch_file,
    report_to_json,
    resolve_weights,
    run_batch_line,
)
from exceptions import InputError, NonIsolatedSingularityError, NotSemiQuasihomogeneousError
from config import WORKERS
from filtration_engine import ModuleTag
from poly_frontend import parse_polynomial

REPORT_KEYS = {'input', 'classification', 'milnor', 'spectral', 'pairing', 'filtration', 'certificates', 'meta'}


def test_analyze_quadric():
    report = analyze(AnalysisRequest("x1^2+x2^2+x3^2"))
    assert set(report) == REPORT_KEYS
    assert report['input']['weights'] == ["1/2", "1/2", "1/2"]
    assert report['input']['weights_source'] == 'inferred'
    assert report['milnor']['mu'] == 1
    assert report['spectral']['alpha_f'] == "3/2"
    assert report['spectral']['classification'] == 'Rational'
    assert report['spectral']['r0'] is None
    assert report['filtration']['exact_level'] is True
    assert certified_bound(report) == 0


def test_analyze_cubic():
    report = analyze(AnalysisRequest("x1^3+x2^3+x3^3"))
    assert report['milnor']['mu'] == 8
    assert report['spectral']['bfunction'] == "(s+1)^2(s+4/3)(s+5/3)(s+2)"
    assert report['spectral']['classification'] == 'DuBoisOnly'
    assert report['filtration']['k0'] == 1
    assert report['filtration']['k1'] == 0
    assert report['filtration']['top_witness'] is True
    assert [r['bbar_dim'] for r in report['pairing']['rows']][:2] == [1, 2]
    assert all(r['perfect'] for r in report['pairing']['rows'])
    kinds = [c['verdict']['kind'] for c in report['certificates']]
    assert kinds == ['CertifiedUpTo', 'WitnessFailure']
    assert report['certificates'][1]['verdict']['witness'] == "x1*x2*x3/f^2"
    assert certified_bound(report) == 1


def test_report_json_round_trip():
    report = analyze(AnalysisRequest("x1^2+x2^2", module=ModuleTag.M))
    text = report_to_json(report)
    loaded = json.loads(text)
    assert loaded['meta']['module'] == 'M'
    assert json.dumps(loaded) == text


def test_analyze_rejects_bad_inputs():
    with pytest.raises(NonIsolatedSingularityError):
        analyze(AnalysisRequest("x1^2*x2^2"))
    with pytest.raises(NotSemiQuasihomogeneousError):
        analyze(AnalysisRequest("x1^2+x2^3+x3^3", weights="1/3,1/3,1/3"))
    with pytest.raises(InputError):
        analyze(AnalysisRequest("x1^2.5+x2"))


def test_resolve_weights():
    f = parse_polynomial("x1^3+x2^3+x3^3")
    w, source = resolve_weights(f, "1/3,1/3,1/3")
    assert source == 'given'
    assert w.weights == (Fraction(1, 3),) * 3


def test_parse_batch_line():
    request = parse_batch_line("'x1^3 + x2^3' --module M --max-level 2 --max-degree 5/2")
    assert request.expression == "x1^3 + x2^3"
    assert request.module == ModuleTag.M
    assert request.max_level == 2
    assert request.max_degree == Fraction(5, 2)
    with pytest.raises(InputError):
        parse_batch_line("x1^2+x2^2 --bogus")
    with pytest.raises(InputError):
        parse_batch_line("x1^2+x2^2 --module N")


def test_run_batch_line_error_record():
    code, payload = run_batch_line(3, "x1^2.5+x2")
    assert code == 1
    assert payload['line'] == 3
    assert payload['exit_code'] == 1
    assert "position 4" in payload['error']


def test_read_batch_file(tmp_path):
    path = tmp_path / "inputs.txt"
    path.write_text("# fermat quadrics\nx1^2+x2^2\n\nx1^2.5+x2\n", encoding='utf-8')
    assert read_batch_file(str(path)) == [(2, "x1^2+x2^2"), (4, "x1^2.5+x2")]
    with pytest.raises(InputError):
        read_batch_file(str(tmp_path / "missing.txt"))


def test_batch_runner_keeps_order():
    lines = [(1, "x1^2+x2^2"), (2, "x1^2.5+x2"), (3, "x1^2*x2^2")]
    results = asyncio.run(BatchRunner(workers=1).run(lines))
    assert [code for code, _ in results] == [0, 1, 2]
    assert results[0][1]['milnor']['mu'] == 1
    assert batch_exit_code(results) == 2
    assert asyncio.run(BatchRunner(workers=1).run([])) == []
    assert batch_exit_code([]) == 0


def test_report_degrees_are_exact_json():
    report = analyze(AnalysisRequest("x1^3+x2^3+x3^3"))
    assert report['certificates'][1]['verdict']['delta'] == {'num': 0, 'den': 1, 'scaled': 0}
    entries = report['filtration']['table']['entries']
    assert entries
    for entry in entries:
        delta = entry['delta']
        assert set(delta) == {'num', 'den', 'scaled'}
        assert Fraction(delta['scaled'], 3) == Fraction(delta['num'], delta['den'])


def test_pairing_section_names_its_source():
    assert analyze(AnalysisRequest("x1^3+x2^3+x3^3"))['pairing']['computed_from'] == 'input'
    semi = analyze(AnalysisRequest("x1^4+x2^4+x3^4+x1^2*x2^2*x3", weights="1/4,1/4,1/4"))
    assert semi['classification']['kind'] == 'SemiQuasihomogeneous'
    assert semi['pairing']['computed_from'] == 'principal part'


def test_batch_runner_workers_capped_by_setting():
    assert BatchRunner(workers=10 ** 6).workers == WORKERS
    assert BatchRunner(workers=0).workers == 1
