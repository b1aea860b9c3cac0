from fractions import Fraction

import pytest

from exceptions import InputError
from graded_jacobian import (
    DegreeIndex,
    alpha_f,
    beta_f,
    count_monomials,
    critical_locus_is_finite,
    enumerate_monomials,
    grid_degrees,
    isolated_singularity_check,
    milnor_data,
    milnor_piece,
    monomials_up_to,
    poincare_exponents,
    weighted_degree,
)
from poly_frontend import Monomial, WeightSystem, parse_polynomial

CUBIC_W = WeightSystem((Fraction(1, 3),) * 3)
WIDE_W = WeightSystem((Fraction(1, 6), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))


def test_alpha_and_beta():
    assert alpha_f(CUBIC_W) == 1
    assert beta_f(CUBIC_W) == 2
    assert alpha_f(WIDE_W) == Fraction(11, 12)
    assert beta_f(WIDE_W) == Fraction(37, 12)


def test_weighted_degree_is_shifted():
    assert weighted_degree(Monomial((0, 0, 0)), CUBIC_W).value == 1
    assert weighted_degree(Monomial((1, 1, 1)), CUBIC_W).value == 2
    assert weighted_degree(Monomial((4, 2, 2, 2)), WIDE_W).value == Fraction(37, 12)


def test_degree_index():
    d = DegreeIndex.of(Fraction(4, 3), CUBIC_W)
    assert d.scaled == 4 and d.v == 3
    assert not d.is_integer
    assert str(d) == "4/3"
    assert DegreeIndex.of(2, CUBIC_W) < DegreeIndex.of(Fraction(7, 3), CUBIC_W)
    with pytest.raises(InputError):
        DegreeIndex.of(Fraction(1, 2), CUBIC_W)


def test_enumerate_monomials():
    assert enumerate_monomials(CUBIC_W, 1) == [Monomial((0, 0, 0))]
    cubics = enumerate_monomials(CUBIC_W, 2)
    assert len(cubics) == 10
    assert cubics == sorted(cubics)
    assert enumerate_monomials(CUBIC_W, Fraction(1, 2)) == []
    assert count_monomials(CUBIC_W, Fraction(5, 3)) == 6


def test_grid_and_truncated_monomials():
    assert len(grid_degrees(WIDE_W, Fraction(11, 12), Fraction(37, 12))) == 27
    assert [d.value for d in grid_degrees(CUBIC_W, 1, 2, include_lo=False)] == [Fraction(4, 3), Fraction(5, 3), 2]
    assert len(monomials_up_to(WIDE_W, Fraction(37, 12))) == 790
    ordered = monomials_up_to(CUBIC_W, 2)
    degrees = [weighted_degree(m, CUBIC_W) for m in ordered]
    assert degrees == sorted(degrees)


def test_poincare_exponents():
    assert poincare_exponents(WeightSystem((Fraction(1, 2), Fraction(1, 2)))) == [1]
    exps = poincare_exponents(CUBIC_W)
    assert sorted(exps) == [1] + [Fraction(4, 3)] * 3 + [Fraction(5, 3)] * 3 + [2]


def test_milnor_piece_socle():
    f = parse_polynomial("x1^3+x2^3+x3^3")
    piece, dim = milnor_piece(f, CUBIC_W, 2)
    assert dim == 1
    assert piece.quotient_basis == (Monomial((1, 1, 1)),)
    assert len(piece.basis) == 10


def test_milnor_data_cubic():
    md = milnor_data(parse_polynomial("x1^3+x2^3+x3^3"), CUBIC_W)
    assert md.mu == 8
    assert md.dim_at(Fraction(4, 3)) == 3
    assert md.dim_at(2) == 1


def test_milnor_data_wide_principal_part():
    md = milnor_data(parse_polynomial("x1^6+x2^4+x3^4+x4^4"), WIDE_W)
    assert md.mu == 135
    assert md.dim_at(2) == 7
    assert md.exponents[0] == Fraction(11, 12)
    assert md.exponents[-1] == Fraction(37, 12)


def test_isolated_singularity_check():
    assert isolated_singularity_check(parse_polynomial("x1^3+x2^3+x3^3"), CUBIC_W)
    quarter = WeightSystem((Fraction(1, 4), Fraction(1, 4)))
    assert not isolated_singularity_check(parse_polynomial("x1^2*x2^2"), quarter)


def test_critical_locus_is_finite():
    assert critical_locus_is_finite(parse_polynomial("x1*x2"))
    assert not critical_locus_is_finite(parse_polynomial("x1^2*x2^2"))
