"""Formatting helpers for analysis reports."""

from fractions import Fraction
from typing import Any, Dict, List, Sequence

from config import MAX_TABLE_ROWS
from graded_jacobian import DegreeIndex


def format_rational(value: Any) -> str:
    """Exact "p/q" form; integers print without a denominator."""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def degree_json(degree: DegreeIndex) -> Dict[str, Any]:
    value = degree.value
    return {'num': value.numerator, 'den': value.denominator, 'scaled': degree.scaled}


def format_degree(degree: Dict[str, Any]) -> str:
    """Inverse of degree_json for display."""
    return format_rational(Fraction(degree['num'], degree['den']))


def format_elapsed(milliseconds: int) -> str:
    """Format a duration in milliseconds as S.mmm s or M:SS."""
    if milliseconds < 0:
        return "Unknown"
    seconds, millis = divmod(milliseconds, 1000)
    if seconds < 60:
        return f"{seconds}.{millis:03d}s"
    minutes = seconds // 60
    return f"{minutes}:{seconds % 60:02d}"


def create_section(title: str, lines: Sequence[str]) -> str:
    """A titled block with consistent underline."""
    body = "\n".join(f"  {line}" for line in lines) if lines else "  (none)"
    return f"{title}\n{'-' * len(title)}\n{body}"


def create_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> List[str]:
    """Aligned text rows, truncated to MAX_TABLE_ROWS."""
    shown = [[str(c) for c in row] for row in rows[:MAX_TABLE_ROWS]]
    widths = [len(h) for h in headers]
    for row in shown:
        widths = [max(wd, len(c)) for wd, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(wd) for h, wd in zip(headers, widths))]
    lines.extend("  ".join(c.ljust(wd) for c, wd in zip(row, widths)) for row in shown)
    if len(rows) > MAX_TABLE_ROWS:
        lines.append(f"... and {len(rows) - MAX_TABLE_ROWS} more rows")
    return lines


def _certificate_lines(cert: Dict[str, Any]) -> List[str]:
    verdict = cert['verdict']
    head = f"{cert['module']} level <= {cert['bound']}: {verdict['kind']}"
    if verdict['kind'] == 'WitnessFailure':
        head += f" at p={verdict['p']}, δ={format_degree(verdict['delta'])}, witness {verdict['witness']}"
    elif verdict['kind'] == 'Inconclusive':
        head += f" ({verdict['reason']})"
    return [head] + [f"    {step}" for step in cert['trace']]


def render_text_report(report: Dict[str, Any]) -> str:
    """Human-readable rendering of an analysis report dict."""
    inp = report['input']
    cls = report['classification']
    milnor = report['milnor']
    spectral = report['spectral']
    filtration = report['filtration']

    sections = [
        create_section("Input", [
            f"f = {inp['polynomial']}",
            f"weights = {inp['weights']} ({inp['weights_source']})",
        ]),
        create_section("Classification", [
            f"{cls['kind']}" + (f": {cls['diagnostics']}" if cls['diagnostics'] else ""),
            f"principal part = {cls['principal']}",
        ]),
        create_section("Milnor algebra", [
            f"μ = {milnor['mu']}",
            f"exponents = {', '.join(milnor['exponents'])}",
        ]),
        create_section("Spectral invariants", [
            f"α_f = {spectral['alpha_f']}, n - α_f = {spectral['beta_f']}",
            f"b_f(s) = {spectral['bfunction']}",
            f"class = {spectral['classification']}",
            f"r0 = {spectral['r0']}, dim E_f = {spectral['dim_Ef']}",
            "unipotent Hodge dims: " + (", ".join(
                f"p={p}: {d}" for p, d in spectral['unipotent_hodge_dims'].items()) or "none"),
        ]),
    ]
    pairing = report['pairing']
    pairing_lines = create_table(
        ["degree", "dim Ā", "dim B̄", "perfect"],
        [[format_degree(r['degree']),
          r['abar_dim'], r['bbar_dim'], r['perfect']] for r in pairing['rows']],
    )
    if pairing.get('computed_from') == 'principal part':
        pairing_lines.insert(0, "graded data of the principal part f' only")
    sections.append(create_section("Residue pairing", pairing_lines))

    table = filtration['table']
    filtration_lines = [
        f"k0 = {filtration['k0']}, k1 = {filtration['k1']}",
        f"top witness: {filtration['top_witness']}, surjective above n - α_f: {filtration['surjective']}",
        f"{table['module']} table:",
    ]
    filtration_lines.extend(create_table(
        ["p", "δ", "dim"],
        [[e['p'], format_degree(e['delta']), e['dim']] for e in table['entries'] if e['dim']],
    ))
    sections.append(create_section("Hodge filtration", filtration_lines))

    cert_lines: List[str] = []
    for cert in report['certificates']:
        cert_lines.extend(_certificate_lines(cert))
    sections.append(create_section("Generating level", cert_lines))

    meta = report['meta']
    sections.append(create_section("Run", [
        f"version {meta['version']}, elapsed {format_elapsed(meta['elapsed_ms'])}",
        f"cutoffs p <= {meta['cutoffs']['p_max']}, δ <= {meta['cutoffs']['delta_max']}, "
        f"pole <= {meta['cutoffs']['pole_max']}",
    ]))
    return "\n\n".join(sections)
