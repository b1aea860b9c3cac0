from fractions import Fraction

from sympy import Rational, Symbol, expand

from graded_jacobian import milnor_data
from poly_frontend import WeightSystem, parse_polynomial
from spectral_invariants import (
    SingularityClass,
    bfunction,
    classify_singularity,
    invariant_dim,
    minimal_exponent,
    monodromy_eigenspace_dims,
    r0_and_quotient_level,
    spectral_report,
    unipotent_hodge_dims,
)


def cubic():
    return milnor_data(parse_polynomial("x1^3+x2^3+x3^3"), WeightSystem((Fraction(1, 3),) * 3))


def test_minimal_exponent():
    w = WeightSystem((Fraction(1, 6), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))
    assert minimal_exponent(w) == Fraction(11, 12)


def test_bfunction_cubic():
    b = bfunction(cubic())
    assert b.roots == ((1, 2), (Fraction(4, 3), 1), (Fraction(5, 3), 1), (2, 1))
    assert str(b) == "(s+1)^2(s+4/3)(s+5/3)(s+2)"
    assert b.root_list() == [1, 1, Fraction(4, 3), Fraction(5, 3), 2]
    s = Symbol('s')
    expected = (s + 1) ** 2 * (s + Rational(4, 3)) * (s + Rational(5, 3)) * (s + 2)
    assert expand(b.as_expr(s) - expected) == 0


def test_bfunction_node():
    md = milnor_data(parse_polynomial("x1^2+x2^2"), WeightSystem((Fraction(1, 2),) * 2))
    assert bfunction(md).roots == ((1, 2),)


def test_classification_thresholds():
    assert classify_singularity(Fraction(3, 2)) == SingularityClass.RATIONAL
    assert classify_singularity(Fraction(1)) == SingularityClass.DU_BOIS_ONLY
    assert classify_singularity(Fraction(11, 12)) == SingularityClass.NEITHER


def test_eigenspaces_and_unipotent_part():
    md = cubic()
    assert monodromy_eigenspace_dims(md) == {0: 2, Fraction(1, 3): 3, Fraction(2, 3): 3}
    assert unipotent_hodge_dims(md) == {1: 1, 2: 1}
    assert invariant_dim(md) == 2


def test_r0_cubic_and_quadric():
    assert r0_and_quotient_level(cubic()) == (2, 1)
    quadric = milnor_data(parse_polynomial("x1^2+x2^2+x3^2"), WeightSystem((Fraction(1, 2),) * 3))
    assert r0_and_quotient_level(quadric) == (None, None)


def test_spectral_report_wide_principal_part():
    w = WeightSystem((Fraction(1, 6), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))
    report = spectral_report(milnor_data(parse_polynomial("x1^6+x2^4+x3^4+x4^4"), w))
    assert report.classification == SingularityClass.NEITHER
    assert report.unipotent_hodge_dims == {2: 7}
    assert report.r0 == 3
    assert report.dim_Ef == 7
    assert report.quotient_generated == 1
