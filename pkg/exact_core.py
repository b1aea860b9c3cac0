"""Exact rational linear algebra for the singularity Hodge-level toolkit.

Dense QMatrix operations go through sympy's DomainMatrix with
fraction-free elimination over ZZ (rows are cleared of denominators
first, which never changes a row space). The sparse EchelonBasis is an
incremental integer-preserving row echelon used by the graded and
U-truncated computations, where columns are ordered so that the smallest
column index is the leading (lowest degree) term.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from config import RREF_METHOD
from exceptions import DimensionMismatchError

logger = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Convert a ZZ/QQ domain element (or int/Fraction) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def to_qq(value: Number):
    """Convert an int or Fraction to a QQ domain element."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


@dataclass(frozen=True)
class QMatrix:
    """Dense row-major matrix of exact rationals."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError("matrix shape must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: Optional[int] = None) -> 'QMatrix':
        """Build from a list of rows; `cols` is required when there are no rows."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries: List[Fraction] = []
        for row in rows:
            if len(row) != cols:
                raise DimensionMismatchError(f"row of length {len(row)} in a {cols}-column matrix")
            entries.extend(Fraction(x) for x in row)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'QMatrix':
        return cls(rows, cols, tuple(Fraction(0) for _ in range(rows * cols)))

    @classmethod
    def identity(cls, size: int) -> 'QMatrix':
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(size)] for i in range(size)], cols=size
        )

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[Tuple[Fraction, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> 'QMatrix':
        return QMatrix.from_rows(
            [[self.entries[r * self.cols + c] for r in range(self.rows)] for c in range(self.cols)],
            cols=self.rows,
        )


class SpanResult(NamedTuple):
    """Outcome of a span-membership query."""

    contained: bool
    coefficients: Optional[Tuple[Fraction, ...]]


def _integer_matrix(rows: Sequence[Sequence[Number]], cols: int) -> DomainMatrix:
    """Sparse DomainMatrix over ZZ with each row scaled to integer entries."""
    dok = {}
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                dok[(i, j)] = to_qq(x)
    dm = DomainMatrix.from_dok(dok, (len(rows), cols), QQ)
    _, integral = dm.clear_denoms_rowwise(convert=True)
    return integral


def _rref_den(dm: DomainMatrix):
    return dm.rref_den(method=RREF_METHOD)


def rank(m: QMatrix) -> int:
    """Exact rank over the rationals."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, _, pivots = _rref_den(_integer_matrix(m.to_rows(), m.cols))
    return len(pivots)


def pivot_columns(m: QMatrix) -> Tuple[int, ...]:
    """Pivot columns of the reduced row echelon form of `m`."""
    if m.rows == 0 or m.cols == 0:
        return ()
    _, _, pivots = _rref_den(_integer_matrix(m.to_rows(), m.cols))
    return tuple(pivots)


def _check_lengths(vectors: Sequence[Sequence[Number]], length: int) -> None:
    for vec in vectors:
        if len(vec) != length:
            raise DimensionMismatchError(f"vector of length {len(vec)}, expected {length}")


def in_span(vectors: Sequence[Sequence[Number]], target: Sequence[Number]) -> SpanResult:
    """Decide whether `target` lies in the span of `vectors`.

    When it does, the returned coefficients reproduce `target` exactly.
    """
    length = len(target)
    _check_lengths(vectors, length)
    k = len(vectors)
    if k == 0:
        if any(target):
            return SpanResult(False, None)
        return SpanResult(True, ())
    # Columns are the generators, the last column is the target.
    augmented = [[vectors[j][i] for j in range(k)] + [target[i]] for i in range(length)]
    if length == 0:
        return SpanResult(True, tuple(Fraction(0) for _ in range(k)))
    reduced, den, pivots = _rref_den(_integer_matrix(augmented, k + 1))
    if k in pivots:
        return SpanResult(False, None)
    dok = reduced.to_dok()
    den = int(den)
    coefficients = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        coefficients[c] = Fraction(int(dok.get((i, k), 0)), den)
    return SpanResult(True, tuple(coefficients))


def quotient_dim(ambient_dim: int, subspace: Sequence[Sequence[Number]]) -> int:
    """ambient_dim minus the rank of the subspace spanned by `subspace`."""
    _check_lengths(subspace, ambient_dim)
    if not subspace:
        return ambient_dim
    return ambient_dim - rank(QMatrix.from_rows(subspace, cols=ambient_dim))


def nullspace(m: QMatrix) -> List[Tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        return list(QMatrix.identity(m.cols).to_rows())
    dm = _integer_matrix(m.to_rows(), m.cols).convert_to(QQ)
    basis = dm.nullspace()
    dok = basis.to_dok()
    rows, _ = basis.shape
    return [
        tuple(to_fraction(dok.get((i, j), QQ(0))) for j in range(m.cols))
        for i in range(rows)
    ]


def _primitive(vec: Dict[int, int]) -> Dict[int, int]:
    """Divide out the content and make the leading entry positive."""
    g = 0
    for x in vec.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = vec[min(vec)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        vec = {c: x // g for c, x in vec.items()}
    return vec


def integral_row(row: Dict[int, Number]) -> Dict[int, int]:
    """Scale a sparse rational row to a primitive integer row."""
    denominators = 1
    for x in row.values():
        if isinstance(x, Fraction) and x.denominator != 1:
            denominators = denominators * x.denominator // gcd(denominators, x.denominator)
    vec = {}
    for c, x in row.items():
        if x:
            scaled = Fraction(x) * denominators
            vec[c] = scaled.numerator
    return _primitive(vec) if vec else vec


class EchelonBasis:
    """Incremental sparse row echelon form over the integers.

    Rows are dicts column -> coefficient. The leading entry of a row is its
    smallest column; eliminating a leading entry cross-multiplies two
    integer rows and strips the content, so no fractions ever appear.
    """

    def __init__(self) -> None:
        self._pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_columns(self) -> List[int]:
        return sorted(self._pivots)

    def reduce(self, row: Dict[int, Number]) -> Dict[int, int]:
        """Residual of `row` after eliminating every reachable pivot (empty if in span)."""
        vec = integral_row(row)
        while vec:
            lead = min(vec)
            pivot = self._pivots.get(lead)
            if pivot is None:
                return vec
            a, b = vec[lead], pivot[lead]
            merged = {c: b * x for c, x in vec.items()}
            for c, y in pivot.items():
                value = merged.get(c, 0) - a * y
                if value:
                    merged[c] = value
                else:
                    merged.pop(c, None)
            vec = _primitive(merged) if merged else merged
        return vec

    def add(self, row: Dict[int, Number]) -> bool:
        """Insert a row; True when it enlarged the span."""
        residual = self.reduce(row)
        if not residual:
            return False
        self._pivots[min(residual)] = residual
        return True

    def extend(self, rows: Iterable[Dict[int, Number]]) -> int:
        """Insert many rows; returns how many were independent."""
        return sum(1 for row in rows if self.add(row))

    def contains(self, row: Dict[int, Number]) -> bool:
        return not self.reduce(row)
