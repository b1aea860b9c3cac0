from fractions import Fraction

import pytest

from check_suites import (
    SUITES,
    fermat,
    load,
    prop_bbar_stabilizes,
    prop_cone_level_exact,
    prop_cone_level_sandwich,
    prop_exponents_match_product_formula,
    prop_f0_law,
    prop_hodge_monotone,
    prop_pairing_adjoint,
    prop_pairing_perfect,
    prop_shift_inclusion,
    prop_spectrum_symmetric,
    prop_strict_generators_in_mf,
    run_property,
    run_suite,
    suite_cutoffs,
)
from exceptions import InputError
from filtration_engine import ModuleTag
from graded_jacobian import DegreeIndex, milnor_data
from poly_frontend import print_polynomial


def test_suite_names():
    assert set(SUITES) == {'poincare', 'pairing', 'symmetry', 'filtration', 'paper-examples'}
    with pytest.raises(InputError):
        run_suite('bogus')


def test_fermat_helper():
    f, w = fermat(3, 4)
    assert print_polynomial(f) == "x1^4 + x2^4 + x3^4"
    assert w.weights == (Fraction(1, 4),) * 3


def test_spectrum_properties():
    f, w = load("x1^2*x2+x2^4", "3/8,1/4")
    assert prop_exponents_match_product_formula(f, w)
    assert prop_spectrum_symmetric(milnor_data(f, w))


def test_pairing_properties_on_cubic():
    f, w = fermat(3, 3)
    assert prop_bbar_stabilizes(f, w)
    assert prop_pairing_adjoint(f, w, Fraction(5, 3))
    assert prop_strict_generators_in_mf(f, w, 1)


def test_filtration_laws_on_cubic():
    f, w = fermat(3, 3)
    cutoffs = suite_cutoffs(w)
    zero = DegreeIndex.of(0, w)
    third = DegreeIndex.of(Fraction(-1, 3), w)
    assert prop_f0_law(f, w, zero, cutoffs)
    assert prop_hodge_monotone(f, w, ModuleTag.MPRIME, 1, third, cutoffs)
    assert prop_shift_inclusion(f, w, 0, DegreeIndex.of(1, w), cutoffs)


@pytest.mark.parametrize("dim_x", [2, 3])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_cone_properties(dim_x, d):
    assert prop_cone_level_sandwich(dim_x, d)
    assert prop_cone_level_exact(dim_x, d)


def test_run_property_reports_errors_as_failures():
    def raises():
        raise InputError("boom")

    assert run_property("raises", raises) == ("raises", False)
    assert run_property("ok", lambda: True) == ("ok", True)


def test_poincare_suite_passes():
    results = run_suite('poincare')
    assert results
    assert all(ok for _, ok in results)


@pytest.mark.parametrize("name", ['paper-examples', 'pairing'])
def test_named_suite_passes(name):
    results = run_suite(name)
    assert results
    failed = [label for label, ok in results if not ok]
    assert failed == []


def test_pairing_properties_on_wide_principal_part():
    f, w = load("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4")
    assert prop_pairing_perfect(f, w)
    assert prop_bbar_stabilizes(f, w)
