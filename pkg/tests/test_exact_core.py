from fractions import Fraction

import pytest

from exact_core import (
    EchelonBasis,
    QMatrix,
    in_span,
    integral_row,
    nullspace,
    pivot_columns,
    quotient_dim,
    rank,
)
from exceptions import DimensionMismatchError


def test_qmatrix_shape_checks():
    m = QMatrix.from_rows([[1, 2], [3, 4]])
    assert m.rows == 2 and m.cols == 2
    assert m.row(1) == (Fraction(3), Fraction(4))
    assert m.transpose().to_rows() == [(1, 3), (2, 4)]
    with pytest.raises(DimensionMismatchError):
        QMatrix.from_rows([[1, 2], [3]])


def test_rank_and_pivots():
    assert rank(QMatrix.from_rows([[1, 2], [2, 4]])) == 1
    assert rank(QMatrix.identity(3)) == 3
    assert rank(QMatrix.zeros(2, 3)) == 0
    assert pivot_columns(QMatrix.from_rows([[0, 1, 1], [0, 2, 3]])) == (1, 2)


def test_rank_with_fractions():
    m = QMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [3, 2]])
    assert rank(m) == 1


def test_in_span_coefficients():
    result = in_span([[1, 0, 1], [0, 1, 1]], [2, 3, 5])
    assert result.contained
    assert result.coefficients == (Fraction(2), Fraction(3))


def test_in_span_rejects_outside_vector():
    result = in_span([[1, 0, 0]], [0, 1, 0])
    assert not result.contained
    assert result.coefficients is None


def test_in_span_empty_generators():
    assert in_span([], [0, 0]).contained
    assert not in_span([], [1, 0]).contained


def test_quotient_dim():
    assert quotient_dim(3, [[1, 1, 0], [2, 2, 0]]) == 2
    assert quotient_dim(2, []) == 2


def test_nullspace():
    kernel = nullspace(QMatrix.from_rows([[1, 1]]))
    assert len(kernel) == 1
    a, b = kernel[0]
    assert a + b == 0 and a != 0
    assert nullspace(QMatrix.identity(2)) == []
    assert len(nullspace(QMatrix.zeros(0, 3))) == 3


def test_integral_row_is_primitive():
    assert integral_row({0: Fraction(1, 2), 3: Fraction(-1, 3)}) == {0: 3, 3: -2}
    assert integral_row({1: -4, 2: 6}) == {1: 2, 2: -3}


def test_echelon_basis_membership():
    basis = EchelonBasis()
    assert basis.add({0: 1, 1: 1})
    assert basis.add({1: 1, 2: 1})
    assert not basis.add({0: 2, 1: 4, 2: 2})
    assert basis.rank == 2
    assert basis.pivot_columns == [0, 1]
    assert basis.contains({0: 1, 2: -1})
    assert not basis.contains({2: 1})


def test_echelon_basis_extend_counts_independent_rows():
    basis = EchelonBasis()
    assert basis.extend([{0: 1}, {0: 3}, {1: Fraction(1, 2)}]) == 2
