"""Weighted grading of A = C[x1..xn] and the graded Milnor algebra.

Degrees use the shifted convention deg(x^ν) = Σ w_i (ν_i + 1), so the
constant monomial sits at α_f = Σ w_i. Degrees are stored as integers
scaled by the common denominator v of the weights.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Dict, List, Sequence, Tuple, Union

from sympy import QQ, groebner, symbols
from sympy.polys.rings import ring

from exact_core import QMatrix, pivot_columns
from exceptions import InconsistencyError, InputError
from poly_frontend import (
    Monomial,
    Polynomial,
    WeightSystem,
    polynomial_ring,
    to_ring_element,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class DegreeIndex:
    """A weighted degree held as scaled / v."""

    scaled: int
    v: int = field(compare=False)

    @classmethod
    def of(cls, value: Union[int, Fraction], w: WeightSystem) -> 'DegreeIndex':
        v = w.common_denominator
        value = Fraction(value)
        if (value * v).denominator != 1:
            raise InputError(f"degree {value} is not a multiple of 1/{v}")
        return cls(int(value * v), v)

    @property
    def value(self) -> Fraction:
        return Fraction(self.scaled, self.v)

    @property
    def is_integer(self) -> bool:
        return self.scaled % self.v == 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class GradedPiece:
    """A^α with the degree-α slice of the Jacobian ideal."""

    degree: DegreeIndex
    basis: Tuple[Monomial, ...]
    ideal_generators: QMatrix
    quotient_basis: Tuple[Monomial, ...]


@dataclass(frozen=True)
class MilnorData:
    """Graded Milnor algebra of a quasihomogeneous polynomial."""

    mu: int
    exponents: Tuple[Fraction, ...]
    per_degree_dims: Dict[DegreeIndex, int]
    weights: WeightSystem
    n: int
    bases: Dict[DegreeIndex, Tuple[Monomial, ...]]

    def dim_at(self, alpha: Union[int, Fraction]) -> int:
        return Counter(self.exponents)[Fraction(alpha)]


def alpha_f(w: WeightSystem) -> Fraction:
    return sum(w.weights, Fraction(0))


def beta_f(w: WeightSystem) -> Fraction:
    return w.n - alpha_f(w)


def scaled_degree(exponents: Sequence[int], scaled_weights: Sequence[int]) -> int:
    return sum(s * (e + 1) for s, e in zip(scaled_weights, exponents))


def weighted_degree(m: Monomial, w: WeightSystem) -> DegreeIndex:
    """α_w(ν + 1) for x^ν."""
    if m.n != w.n:
        raise InputError(f"monomial has {m.n} variables, weights have {w.n}")
    return DegreeIndex(scaled_degree(m.exponents, w.scaled), w.common_denominator)


@lru_cache(maxsize=4096)
def _compositions(scaled_weights: Tuple[int, ...], target: int) -> Tuple[Tuple[int, ...], ...]:
    """Exponent vectors e with Σ s_i e_i == target, lexicographically ascending."""
    if not scaled_weights:
        return ((),) if target == 0 else ()
    if target < 0:
        return ()
    head, rest = scaled_weights[0], scaled_weights[1:]
    out = []
    for e in range(target // head + 1):
        for tail in _compositions(rest, target - head * e):
            out.append((e,) + tail)
    return tuple(out)


def _as_scaled(alpha: Union[DegreeIndex, int, Fraction], w: WeightSystem):
    if isinstance(alpha, DegreeIndex):
        return alpha.scaled
    value = Fraction(alpha) * w.common_denominator
    return value.numerator if value.denominator == 1 else None


def enumerate_monomials(w: WeightSystem, alpha: Union[DegreeIndex, int, Fraction]) -> List[Monomial]:
    """Basis of A^α in lexicographic order; empty when α is off the grid."""
    scaled = _as_scaled(alpha, w)
    if scaled is None:
        return []
    sw = w.scaled
    return [Monomial(e) for e in _compositions(sw, scaled - sum(sw))]


def count_monomials(w: WeightSystem, alpha: Union[DegreeIndex, int, Fraction]) -> int:
    scaled = _as_scaled(alpha, w)
    if scaled is None:
        return 0
    sw = w.scaled
    return len(_compositions(sw, scaled - sum(sw)))


def grid_degrees(w: WeightSystem, lo: Union[int, Fraction], hi: Union[int, Fraction],
                 include_lo: bool = True) -> List[DegreeIndex]:
    """Every multiple of 1/v in [lo, hi] (or (lo, hi] when include_lo is False)."""
    v = w.common_denominator
    start = ceil(Fraction(lo) * v)
    if not include_lo and Fraction(start, v) == Fraction(lo):
        start += 1
    stop = floor(Fraction(hi) * v)
    return [DegreeIndex(s, v) for s in range(start, stop + 1)]


def monomials_up_to(w: WeightSystem, bound: Union[int, Fraction]) -> List[Monomial]:
    """All monomials of degree <= bound, ordered by (degree, lex)."""
    out: List[Monomial] = []
    for degree in grid_degrees(w, alpha_f(w), bound):
        out.extend(enumerate_monomials(w, degree))
    return out


def milnor_piece(f_principal: Polynomial, w: WeightSystem,
                 alpha: Union[DegreeIndex, int, Fraction]) -> Tuple[GradedPiece, int]:
    """(A/(∂f'))^α: basis of A^α, Jacobian slice and quotient dimension."""
    degree = alpha if isinstance(alpha, DegreeIndex) else DegreeIndex.of(alpha, w)
    basis = enumerate_monomials(w, degree)
    column = {m.exponents: j for j, m in enumerate(basis)}
    p = to_ring_element(f_principal)
    _, gens = polynomial_ring(f_principal.n)
    v = w.common_denominator
    rows: List[List[Fraction]] = []
    for i, x in enumerate(gens):
        fi = p.diff(x)
        if not fi:
            continue
        # x^μ f_i lands in A^α when deg(μ) = α - (1 - w_i)
        for mu in enumerate_monomials(w, DegreeIndex(degree.scaled - (v - w.scaled[i]), v)):
            row = [Fraction(0)] * len(basis)
            for exps, coeff in fi.mul_monom(mu.exponents).items():
                j = column.get(exps)
                if j is None:
                    raise InputError(f"{f_principal} is not quasihomogeneous for weights {w}")
                row[j] = Fraction(int(coeff.numerator), int(coeff.denominator))
            rows.append(row)
    generators = QMatrix.from_rows(rows, cols=len(basis))
    pivots = set(pivot_columns(generators))
    quotient = tuple(m for j, m in enumerate(basis) if j not in pivots)
    piece = GradedPiece(degree, tuple(basis), generators, quotient)
    logger.debug(f"Milnor piece at {degree}: {len(basis)} monomials, {len(rows)} generators, dim {len(quotient)}")
    return piece, len(quotient)


def poincare_exponents(w: WeightSystem) -> List[Fraction]:
    """Expand Π (t^{w_i} - t)/(1 - t^{w_i}) in s = t^{1/v}; exponents with multiplicity."""
    v = w.common_denominator
    R, s = ring("s", QQ)
    numerator = R.one
    denominator = R.one
    for a in w.scaled:
        numerator *= s**a - s**v
        denominator *= R.one - s**a
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise InconsistencyError(f"weights {w} admit no isolated quasihomogeneous singularity")
    exponents: List[Fraction] = []
    for (e,), coeff in sorted(quotient.items()):
        if coeff < 0 or coeff.denominator != 1:
            raise InconsistencyError(f"Poincaré polynomial for {w} has coefficient {coeff}")
        exponents.extend([Fraction(e, v)] * int(coeff))
    return exponents


def isolated_singularity_check(f_principal: Polynomial, w: WeightSystem) -> bool:
    """(∂f')^α = A^α on every grid degree of the window (β_f, β_f + 1]."""
    top = beta_f(w)
    for degree in grid_degrees(w, top, top + 1, include_lo=False):
        _, dim = milnor_piece(f_principal, w, degree)
        if dim:
            logger.info(f"Jacobian ideal misses {dim} monomials at degree {degree}: not isolated")
            return False
    return True


def milnor_data(f_principal: Polynomial, w: WeightSystem) -> MilnorData:
    """Milnor algebra by graded pieces, cross-checked against the product formula."""
    per_degree: Dict[DegreeIndex, int] = {}
    bases: Dict[DegreeIndex, Tuple[Monomial, ...]] = {}
    exponents: List[Fraction] = []
    for degree in grid_degrees(w, alpha_f(w), beta_f(w)):
        piece, dim = milnor_piece(f_principal, w, degree)
        per_degree[degree] = dim
        if dim:
            bases[degree] = piece.quotient_basis
            exponents.extend([degree.value] * dim)
    expected = poincare_exponents(w)
    if sorted(exponents) != sorted(expected):
        raise InconsistencyError(
            f"non-isolated or internal inconsistency: Milnor basis gives {len(exponents)} "
            f"exponents, product formula gives {len(expected)}"
        )
    logger.info(f"Milnor number {len(exponents)} for weights {w}")
    return MilnorData(
        mu=len(exponents),
        exponents=tuple(sorted(exponents)),
        per_degree_dims=per_degree,
        weights=w,
        n=w.n,
        bases=bases,
    )


def critical_locus_is_finite(f: Polynomial) -> bool:
    """Weight-free isolation test: the Jacobian ideal is zero-dimensional."""
    xs = symbols(f"x1:{f.n + 1}")
    expr = to_ring_element(f).as_expr(*xs)
    partials = [expr.diff(x) for x in xs]
    if all(p == 0 for p in partials):
        return False
    return groebner(partials, *xs, order='grevlex').is_zero_dimensional
