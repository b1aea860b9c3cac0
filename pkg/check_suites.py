"""Named property suites run by `check <suite>`.

Each `prop_*` predicate returns a bool; suites pair a label with a thunk
so one failing property does not stop the rest.
"""

import logging
from fractions import Fraction
from math import floor, prod
from typing import Callable, Dict, List, Tuple

from exceptions import InputError, SingularityToolError
from filtration_engine import (
    CertifiedUpTo,
    Cutoffs,
    ModuleTag,
    both_formulas_agree,
    certify_level,
    closed_form_levels,
    cone_generating_level,
    default_cutoffs,
    delta_range,
    exactness_probe,
    hodge_piece,
    milnor_range_dims,
    strictness_check,
)
from graded_jacobian import (
    MilnorData,
    alpha_f,
    beta_f,
    count_monomials,
    enumerate_monomials,
    grid_degrees,
    milnor_data,
    poincare_exponents,
)
from poly_frontend import (
    ClassificationKind,
    Polynomial,
    WeightSystem,
    classify,
    euler_identity_holds,
    parse_polynomial,
    parse_weights,
)
from residue_pairing import (
    LocalCohomologyElement,
    apply_partial,
    apply_variable,
    bbar_piece,
    mf_membership,
    multiplication_surjective,
    pairing_perfectness,
    polynomial_partial,
    residue_pair,
)
from spectral_invariants import SingularityClass, classify_singularity, invariant_dim, monodromy_eigenspace_dims

logger = logging.getLogger(__name__)

PropertyResult = Tuple[str, bool]

# (expression, weights): Fermat and mixed isolated singularities, n = 2, 3, 4
WEIGHT_BATTERY: List[Tuple[str, str]] = [
    ("x1^2+x2^2", "1/2,1/2"),
    ("x1^2+x2^3", "1/2,1/3"),
    ("x1^3+x2^4", "1/3,1/4"),
    ("x1^3+x1*x2^3", "1/3,2/9"),
    ("x1^2*x2+x2^4", "3/8,1/4"),
    ("x1^2+x2^2+x3^2", "1/2,1/2,1/2"),
    ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
    ("x1^2+x2^3+x3^5", "1/2,1/3,1/5"),
    ("x1^4+x2^4+x3^4", "1/4,1/4,1/4"),
    ("x1^2*x2+x2^3+x3^2", "1/3,1/3,1/2"),
    ("x1^2+x2^2+x3^2+x4^2", "1/2,1/2,1/2,1/2"),
    ("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
]

SEMIQH_WIDE = ("x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4", "1/6,1/4,1/4,1/4")
SEMIQH_NARROW = ("x1^4+x2^4+x3^4+x1^2*x2^2*x3", "1/4,1/4,1/4")

PAIRING_INPUTS = [
    ("x1^2+x2^2+x3^2", "1/2,1/2,1/2"),
    ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
    ("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
]

FILTRATION_INPUTS = [
    ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
    ("x1^4+x2^4+x3^4", "1/4,1/4,1/4"),
]


def load(expression: str, weights: str) -> Tuple[Polynomial, WeightSystem]:
    f = parse_polynomial(expression)
    return f, parse_weights(weights, f.n)


def fermat(n: int, d: int) -> Tuple[Polynomial, WeightSystem]:
    f = Polynomial(n, {tuple(d if j == i else 0 for j in range(n)): 1 for i in range(n)})
    return f, WeightSystem((Fraction(1, d),) * n)


# --- Milnor algebra and spectrum -------------------------------------------------------

def prop_exponents_match_product_formula(f: Polynomial, w: WeightSystem) -> bool:
    md = milnor_data(f, w)
    expected_mu = prod(1 / x - 1 for x in w.weights)
    return sorted(md.exponents) == sorted(poincare_exponents(w)) and md.mu == expected_mu


def prop_spectrum_symmetric(md: MilnorData) -> bool:
    return sorted(md.exponents) == sorted(md.n - a for a in md.exponents)


def prop_eigenspaces_partition_mu(md: MilnorData) -> bool:
    return sum(monodromy_eigenspace_dims(md).values()) == md.mu


# --- residue pairing ---------------------------------------------------------------------

def prop_pairing_perfect(f: Polynomial, w: WeightSystem) -> bool:
    return all(pairing_perfectness(f, w, d) for d in grid_degrees(w, alpha_f(w), beta_f(w)))


def prop_bbar_stabilizes(f: Polynomial, w: WeightSystem) -> bool:
    """dim B̄^k = dim E_f for integers k in (β_f - 1, β_f + 1]."""
    dim_e = invariant_dim(milnor_data(f, w))
    top = beta_f(w)
    ks = range(floor(top - 1) + 1, floor(top + 1) + 1)
    return all(bbar_piece(f, w, k).dim == dim_e for k in ks)


def prop_pairing_adjoint(f: Polynomial, w: WeightSystem, degree: Fraction) -> bool:
    """<x_i a, b> = <a, x_i b> and <-∂_i a, b> = <a, ∂_i b> on monomials."""
    monos = [m for d in grid_degrees(w, alpha_f(w), degree) for m in enumerate_monomials(w, d)]
    for i in range(f.n):
        for m in monos:
            a = Polynomial(f.n, {m: 1})
            xa = Polynomial(f.n, {tuple(e + (j == i) for j, e in enumerate(m.exponents)): 1})
            da = polynomial_partial(i, a)
            for nu in monos:
                b = LocalCohomologyElement.basis_element(nu)
                if residue_pair(xa, b) != residue_pair(a, apply_variable(i, b)):
                    return False
                if -residue_pair(da, b) != residue_pair(a, apply_partial(i, b)):
                    return False
    return True


def prop_strict_generators_in_mf(f: Polynomial, w: WeightSystem, k: int) -> bool:
    """Every x^μ/f^k with deg μ > k lies in M_f."""
    return all(
        mf_membership(f, w, Polynomial(f.n, {m: 1}), k)
        for d in grid_degrees(w, k, k + 1, include_lo=False)
        for m in enumerate_monomials(w, d)
    )


# --- filtration laws -----------------------------------------------------------------------

def suite_cutoffs(w: WeightSystem, p_max: int = 4) -> Cutoffs:
    return default_cutoffs(w, p_max=p_max, delta_max=beta_f(w) + p_max)


def prop_hodge_monotone(f: Polynomial, w: WeightSystem, tag: ModuleTag, p: int, delta, cutoffs: Cutoffs) -> bool:
    return hodge_piece(f, w, tag, p, delta, cutoffs) <= hodge_piece(f, w, tag, p + 1, delta, cutoffs)


def prop_f0_law(f: Polynomial, w: WeightSystem, delta, cutoffs: Cutoffs) -> bool:
    """F_0 M' at δ >= 0 is all of A^{δ+1}/f."""
    return hodge_piece(f, w, ModuleTag.MPRIME, 0, delta, cutoffs) == count_monomials(w, delta.value + 1)


def prop_shift_inclusion(f: Polynomial, w: WeightSystem, p: int, delta, cutoffs: Cutoffs) -> bool:
    """F_{p+1} M embeds into F_p M''."""
    return (hodge_piece(f, w, ModuleTag.M, p + 1, delta, cutoffs)
            <= hodge_piece(f, w, ModuleTag.MDOUBLEPRIME, p, delta, cutoffs))


def prop_cone_level_sandwich(dim_x: int, d: int) -> bool:
    k1 = cone_generating_level(dim_x, d)
    middle = dim_x - Fraction(dim_x, d) - 1
    return k1 < middle <= k1 + 1 and k1 == closed_form_levels(dim_x, Fraction(dim_x, d))[1]


def prop_cone_level_exact(dim_x: int, d: int) -> bool:
    f, w = fermat(dim_x, d)
    return exactness_probe(f, w, ModuleTag.M).exact is True


def prop_certified(f: Polynomial, w: WeightSystem, tag: ModuleTag, r: int) -> bool:
    return isinstance(certify_level(f, w, tag, r).verdict, CertifiedUpTo)


def prop_semiqh_invariance(f: Polynomial, w: WeightSystem, top=None) -> bool:
    """Spectrum and α_f are read off f', and graded images agree for f and f'."""
    classification = classify(f, w)
    if classification.kind != ClassificationKind.SEMIQUASIHOMOGENEOUS:
        return False
    same_spectrum = milnor_data(classification.principal, w).exponents == tuple(sorted(poincare_exponents(w)))
    return same_spectrum and strictness_check(f, w, top)


# --- suites ----------------------------------------------------------------------------------

def _poincare_suite() -> List[Tuple[str, Callable[[], bool]]]:
    checks = []
    for expr, weights in WEIGHT_BATTERY:
        f, w = load(expr, weights)
        checks.append((f"product formula {expr}", lambda f=f, w=w: prop_exponents_match_product_formula(f, w)))
    return checks


def _symmetry_suite() -> List[Tuple[str, Callable[[], bool]]]:
    checks = []
    for expr, weights in WEIGHT_BATTERY:
        f, w = load(expr, weights)
        checks.append((f"spectrum symmetry {expr}", lambda f=f, w=w: prop_spectrum_symmetric(milnor_data(f, w))))
        checks.append((f"eigenspaces sum to μ {expr}",
                       lambda f=f, w=w: prop_eigenspaces_partition_mu(milnor_data(f, w))))
        checks.append((f"Euler identity {expr}", lambda f=f, w=w: euler_identity_holds(f, w)))
    return checks


def _pairing_suite() -> List[Tuple[str, Callable[[], bool]]]:
    checks = []
    for expr, weights in PAIRING_INPUTS:
        f, w = load(expr, weights)
        checks.append((f"pairing perfect {expr}", lambda f=f, w=w: prop_pairing_perfect(f, w)))
        checks.append((f"B̄ stabilizes to E_f {expr}", lambda f=f, w=w: prop_bbar_stabilizes(f, w)))
        checks.append((f"adjointness {expr}", lambda f=f, w=w: prop_pairing_adjoint(f, w, alpha_f(w) + 1)))
    f, w = load(*PAIRING_INPUTS[1])
    checks.append(("f maps B̄^2 onto B̄^1 for x1^3+x2^3+x3^3", lambda: multiplication_surjective(f, w, 1)))
    return checks


def _filtration_suite() -> List[Tuple[str, Callable[[], bool]]]:
    checks = []
    for expr, weights in FILTRATION_INPUTS:
        f, w = load(expr, weights)
        cutoffs = suite_cutoffs(w)
        top = beta_f(w) + 2
        for p in range(4):
            for tag in ModuleTag:
                deltas = delta_range(w, p, tag, top)
                checks.append((f"{tag.value} monotone at p={p} {expr}",
                               lambda f=f, w=w, tag=tag, p=p, ds=deltas, c=cutoffs:
                               all(prop_hodge_monotone(f, w, tag, p, d, c) for d in ds)))
                checks.append((f"{tag.value} generator formulas agree at p={p} {expr}",
                               lambda f=f, w=w, tag=tag, p=p, ds=deltas, c=cutoffs:
                               all(both_formulas_agree(f, w, tag, p, d, c) for d in ds)))
            deltas = delta_range(w, p, ModuleTag.MDOUBLEPRIME, top)
            checks.append((f"M into M'' shift at p={p} {expr}",
                           lambda f=f, w=w, p=p, ds=deltas, c=cutoffs:
                           all(prop_shift_inclusion(f, w, p, d, c) for d in ds)))
        checks.append((f"F_0 law {expr}",
                       lambda f=f, w=w, c=cutoffs:
                       all(prop_f0_law(f, w, d, c) for d in grid_degrees(w, 0, beta_f(w) + 2))))
        checks.append((f"strict generators lie in M_f {expr}",
                       lambda f=f, w=w: all(prop_strict_generators_in_mf(f, w, k) for k in (1, 2, 3))))
    return checks


def _paper_examples_suite() -> List[Tuple[str, Callable[[], bool]]]:
    wide, wide_w = load(*SEMIQH_WIDE)
    narrow, narrow_w = load(*SEMIQH_NARROW)
    wide_principal = classify(wide, wide_w).principal
    checks = [
        ("wide example is semiquasihomogeneous",
         lambda: classify(wide, wide_w).kind == ClassificationKind.SEMIQUASIHOMOGENEOUS),
        ("wide example α_f = 11/12", lambda: alpha_f(wide_w) == Fraction(11, 12)),
        ("wide example k0 = k1 = 2", lambda: closed_form_levels(4, alpha_f(wide_w)) == (2, 2)),
        ("wide example μ = 135", lambda: milnor_data(wide_principal, wide_w).mu == 135),
        ("wide example unipotent part only at p = 2",
         lambda: {int(a) for a in milnor_data(wide_principal, wide_w).exponents if a.denominator == 1} == {2}),
        ("wide example top range [3, 37/12] is one class at 37/12",
         lambda: {d.value: k for d, k in milnor_range_dims(wide_principal, wide_w, 3, Fraction(37, 12)).items()
                  if k} == {Fraction(37, 12): 1}),
    ]
    for tag in ModuleTag:
        checks.append((f"wide example {tag.value} generated at level <= 1",
                       lambda tag=tag: prop_certified(wide, wide_w, tag, 1)))
    checks.extend([
        ("wide example graded images agree with f'", lambda: prop_semiqh_invariance(wide, wide_w)),
        ("narrow example k1 = 1", lambda: closed_form_levels(3, alpha_f(narrow_w))[1] == 1),
        ("narrow example M generated at level 0", lambda: prop_certified(narrow, narrow_w, ModuleTag.M, 0)),
        ("narrow example graded images agree with f'", lambda: prop_semiqh_invariance(narrow, narrow_w)),
    ])
    expected_class = {
        "x1^2+x2^2+x3^2": SingularityClass.RATIONAL,
        "x1^3+x2^3+x3^3": SingularityClass.DU_BOIS_ONLY,
        "x1^6+x2^4+x3^4+x4^4": SingularityClass.NEITHER,
    }
    for expr, weights in PAIRING_INPUTS:
        _, w = load(expr, weights)
        checks.append((f"{expr} is {expected_class[expr].value}",
                       lambda w=w, cls=expected_class[expr]: classify_singularity(alpha_f(w)) == cls))
    for dim_x in (2, 3):
        for d in (2, 3, 4, 5):
            checks.append((f"cone level sandwich dim X={dim_x}, d={d}",
                           lambda dim_x=dim_x, d=d: prop_cone_level_sandwich(dim_x, d)))
            checks.append((f"cone level exact for M, dim X={dim_x}, d={d}",
                           lambda dim_x=dim_x, d=d: prop_cone_level_exact(dim_x, d)))
    return checks


SUITES: Dict[str, Callable[[], List[Tuple[str, Callable[[], bool]]]]] = {
    'poincare': _poincare_suite,
    'pairing': _pairing_suite,
    'symmetry': _symmetry_suite,
    'filtration': _filtration_suite,
    'paper-examples': _paper_examples_suite,
}


def run_property(label: str, check: Callable[[], bool]) -> PropertyResult:
    try:
        ok = bool(check())
    except SingularityToolError as e:
        logger.error(f"{label}: {e}")
        ok = False
    if not ok:
        logger.warning(f"Property failed: {label}")
    return label, ok


def run_suite(name: str) -> List[PropertyResult]:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    logger.info(f"Running suite {name}")
    return [run_property(label, check) for label, check in SUITES[name]()]
