from fractions import Fraction

import pytest

from exceptions import InputError, TruncationError
from filtration_engine import (
    CertifiedUpTo,
    Cutoffs,
    Inconclusive,
    ModuleElement,
    ModuleTag,
    WitnessFailure,
    both_formulas_agree,
    build_piece_table,
    certify_level,
    closed_form_levels,
    cone_generating_level,
    default_cutoffs,
    delta_range,
    exactness_probe,
    generating_bound,
    graded_image_dims,
    hodge_piece,
    milnor_range_dims,
    strictness_check,
    surjectivity_check,
    top_witness,
)
from graded_jacobian import DegreeIndex
from poly_frontend import WeightSystem, parse_polynomial

CUBIC = parse_polynomial("x1^3+x2^3+x3^3")
CUBIC_W = WeightSystem((Fraction(1, 3),) * 3)
NARROW = parse_polynomial("x1^4+x2^4+x3^4+x1^2*x2^2*x3")
NARROW_W = WeightSystem((Fraction(1, 4),) * 3)
WIDE = parse_polynomial("x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4")
WIDE_PRINCIPAL = parse_polynomial("x1^6+x2^4+x3^4+x4^4")
WIDE_W = WeightSystem((Fraction(1, 6), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))


def test_closed_form_levels():
    assert closed_form_levels(4, Fraction(11, 12)) == (2, 2)
    assert closed_form_levels(3, Fraction(1)) == (1, 0)
    assert closed_form_levels(3, Fraction(3, 2)) == (0, 0)
    assert closed_form_levels(2, Fraction(1)) == (0, -1)
    with pytest.raises(InputError):
        closed_form_levels(1, Fraction(1, 2))


def test_generating_bound_clamps_k1():
    assert generating_bound(ModuleTag.MPRIME, 3, Fraction(1)) == 1
    assert generating_bound(ModuleTag.MDOUBLEPRIME, 3, Fraction(1)) == 1
    assert generating_bound(ModuleTag.M, 3, Fraction(1)) == 0
    assert generating_bound(ModuleTag.M, 2, Fraction(1)) == 0


@pytest.mark.parametrize("dim_x,d,level", [
    (2, 2, -1), (2, 3, 0), (2, 4, 0), (2, 5, 0),
    (3, 2, 0), (3, 3, 0), (3, 4, 1), (3, 5, 1),
])
def test_cone_generating_level(dim_x, d, level):
    assert cone_generating_level(dim_x, d) == level


def test_cone_generating_level_rejects_small_inputs():
    with pytest.raises(InputError):
        cone_generating_level(1, 3)
    with pytest.raises(InputError):
        cone_generating_level(3, 1)


def test_default_cutoffs():
    cutoffs = default_cutoffs(CUBIC_W)
    assert cutoffs == Cutoffs(p_max=3, delta_max=Fraction(5), pole_max=4)
    assert default_cutoffs(CUBIC_W, p_max=6).pole_max == 7


def test_module_element_degree():
    assert ModuleElement(parse_polynomial("x1*x2*x3"), 2).weighted_degree(CUBIC_W) == 0
    assert ModuleElement(parse_polynomial("x1*x2*x3+x1"), 2).weighted_degree(CUBIC_W) is None


def test_f0_law_and_negative_levels():
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.MPRIME, 0, 0) == 1
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.MPRIME, 0, 1) == 10
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.MDOUBLEPRIME, 0, 1) == 9
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.M, 0, 1) == 0
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.MPRIME, -1, 0) == 0


def test_strict_generators_of_m():
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.M, 1, Fraction(1, 3)) == 3
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.M, 1, 1) == 9
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.M, 1, 0) == 0


def test_negative_degree_slice_needs_derivatives():
    # only ∂_i(1/f) = -3x_i^2/f^2 reaches degree -1/3
    assert hodge_piece(CUBIC, CUBIC_W, ModuleTag.MPRIME, 1, Fraction(-1, 3)) == 3


def test_generator_sum_truncates_at_closed_form_level():
    assert both_formulas_agree(CUBIC, CUBIC_W, ModuleTag.MPRIME, 2, 0)


def test_hodge_piece_guards():
    with pytest.raises(TruncationError):
        hodge_piece(CUBIC, CUBIC_W, ModuleTag.MPRIME, 10, 0)
    with pytest.raises(InputError):
        hodge_piece(NARROW, NARROW_W, ModuleTag.MPRIME, 1, 0)


def test_delta_range_and_table():
    degrees = delta_range(CUBIC_W, 1, ModuleTag.MPRIME, Fraction(0))
    assert [d.value for d in degrees] == [Fraction(-1, 3), 0]
    table = build_piece_table(CUBIC, CUBIC_W, ModuleTag.MPRIME, default_cutoffs(CUBIC_W),
                              p_limit=1, delta_limit=Fraction(0))
    assert table.dim(0, DegreeIndex.of(0, CUBIC_W)) == 1
    assert table.dim(1, DegreeIndex.of(Fraction(-1, 3), CUBIC_W)) == 3


def test_jacobian_side_checks():
    assert top_witness(CUBIC, CUBIC_W)
    assert surjectivity_check(CUBIC, CUBIC_W, Fraction(13, 6))
    with pytest.raises(InputError):
        surjectivity_check(CUBIC, CUBIC_W, 2)
    assert milnor_range_dims(CUBIC, CUBIC_W, 2, 2) == {DegreeIndex.of(2, CUBIC_W): 1}


def test_graded_image_dims_cubic():
    dims = graded_image_dims(CUBIC, CUBIC_W, Fraction(5, 3))
    assert dims[DegreeIndex.of(1, CUBIC_W)] == 0
    assert dims[DegreeIndex.of(Fraction(4, 3), CUBIC_W)] == 0
    assert dims[DegreeIndex.of(Fraction(5, 3), CUBIC_W)] == 3


def test_strictness_for_narrow_semiqh():
    assert strictness_check(NARROW, NARROW_W)


def test_certify_mprime_below_closed_level_fails_with_witness():
    cert = certify_level(CUBIC, CUBIC_W, ModuleTag.MPRIME, 0)
    assert not cert.certified
    assert isinstance(cert.verdict, WitnessFailure)
    assert cert.verdict.p == 1
    assert cert.verdict.delta == 0
    assert cert.verdict.witness == ModuleElement(parse_polynomial("x1*x2*x3"), 2)
    assert cert.trace


def test_certify_at_closed_levels():
    assert certify_level(CUBIC, CUBIC_W, ModuleTag.MPRIME, 1).certified
    assert certify_level(CUBIC, CUBIC_W, ModuleTag.M, 0).certified
    narrow = certify_level(NARROW, NARROW_W, ModuleTag.M, 0)
    assert isinstance(narrow.verdict, CertifiedUpTo)


def test_certify_inconclusive_and_invalid():
    tight = Cutoffs(p_max=0, delta_max=Fraction(10), pole_max=1)
    cert = certify_level(CUBIC, CUBIC_W, ModuleTag.MPRIME, 0, tight)
    assert isinstance(cert.verdict, Inconclusive)
    with pytest.raises(InputError):
        certify_level(CUBIC, CUBIC_W, ModuleTag.MPRIME, -1)


def test_exactness_at_closed_form_level_cubic():
    result = exactness_probe(CUBIC, CUBIC_W, ModuleTag.MPRIME)
    assert result.expected_level == 1
    assert result.exact is True
    assert isinstance(result.lower.verdict, WitnessFailure)
    m_result = exactness_probe(CUBIC, CUBIC_W, ModuleTag.M)
    assert m_result.expected_level == 0
    assert m_result.lower is None
    assert m_result.exact is True


@pytest.mark.parametrize("tag", list(ModuleTag))
def test_wide_semiqh_generated_at_level_one(tag):
    cert = certify_level(WIDE, WIDE_W, tag, 1)
    assert isinstance(cert.verdict, CertifiedUpTo)


@pytest.mark.parametrize("tag", list(ModuleTag))
def test_wide_principal_part_not_generated_at_level_one(tag):
    assert generating_bound(tag, 4, Fraction(11, 12)) == 2
    cert = certify_level(WIDE_PRINCIPAL, WIDE_W, tag, 1)
    assert isinstance(cert.verdict, WitnessFailure)
    assert cert.verdict.p == 2


def test_wide_top_milnor_range_is_one_class():
    dims = milnor_range_dims(WIDE_PRINCIPAL, WIDE_W, 3, Fraction(37, 12))
    nonzero = {d.value: k for d, k in dims.items() if k}
    assert nonzero == {Fraction(37, 12): 1}
    assert top_witness(WIDE_PRINCIPAL, WIDE_W)


def test_strictness_for_wide_semiqh():
    assert strictness_check(WIDE, WIDE_W)


@pytest.mark.parametrize("dim_x", [2, 3])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_fermat_m_exact_at_cone_level(dim_x, d):
    f = parse_polynomial("+".join(f"x{i}^{d}" for i in range(1, dim_x + 1)))
    w = WeightSystem((Fraction(1, d),) * dim_x)
    result = exactness_probe(f, w, ModuleTag.M)
    assert result.expected_level == max(cone_generating_level(dim_x, d), 0)
    assert result.exact is True
