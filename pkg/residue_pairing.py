"""Local cohomology B, the residue pairing, and the spaces Ā_f^α, B̄_f^α.

An element of B is stored by dual exponents: the monomial ν stands for
x^{-ν-1}, so the pairing with A is the diagonal dot product on matching
exponents and the constant x^{-1} is ν = 0.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from exact_core import QMatrix, nullspace, pivot_columns, rank
from exceptions import InputError
from graded_jacobian import DegreeIndex, enumerate_monomials
from poly_frontend import (
    Monomial,
    Polynomial,
    WeightSystem,
    from_ring_element,
    partial_derivatives,
    polynomial_ring,
    to_ring_element,
    weighted_order,
)

logger = logging.getLogger(__name__)


class LocalCohomologyElement:
    """Finite combination of x^{-ν-1}."""

    __slots__ = ('n', '_terms')

    def __init__(self, n: int, terms: Optional[Mapping[Union[Monomial, Tuple[int, ...]], Fraction]] = None):
        self.n = n
        cleaned: Dict[Monomial, Fraction] = {}
        for nu, coeff in (terms or {}).items():
            if not isinstance(nu, Monomial):
                nu = Monomial(tuple(nu))
            coeff = Fraction(coeff)
            if coeff:
                total = cleaned.get(nu, Fraction(0)) + coeff
                if total:
                    cleaned[nu] = total
                else:
                    cleaned.pop(nu, None)
        self._terms = cleaned

    @classmethod
    def basis_element(cls, nu: Monomial) -> 'LocalCohomologyElement':
        return cls(nu.n, {nu: Fraction(1)})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, nu: Monomial) -> Fraction:
        return self._terms.get(nu, Fraction(0))

    def __add__(self, other: 'LocalCohomologyElement') -> 'LocalCohomologyElement':
        terms = dict(self._terms)
        for nu, c in other._terms.items():
            terms[nu] = terms.get(nu, Fraction(0)) + c
        return LocalCohomologyElement(self.n, terms)

    def __sub__(self, other: 'LocalCohomologyElement') -> 'LocalCohomologyElement':
        return self + other.scale(-1)

    def scale(self, c: Union[int, Fraction]) -> 'LocalCohomologyElement':
        return LocalCohomologyElement(self.n, {nu: c * x for nu, x in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalCohomologyElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for nu, c in sorted(self._terms.items()):
            power = "*".join(f"x{i}^{-(e + 1)}" for i, e in enumerate(nu.exponents, 1))
            parts.append(f"{c}*{power}")
        return " + ".join(parts)


@dataclass(frozen=True)
class BbarPiece:
    degree: Fraction
    basis: Tuple[LocalCohomologyElement, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class AbarPiece:
    degree: Fraction
    representatives: Tuple[Monomial, ...]

    @property
    def dim(self) -> int:
        return len(self.representatives)


def act(a: Polynomial, b: LocalCohomologyElement) -> LocalCohomologyElement:
    """A-module action: x^μ · x^{-ν-1} = x^{-(ν-μ)-1}, zero unless μ <= ν."""
    if a.n != b.n:
        raise InputError(f"polynomial in {a.n} variables acting on B in {b.n} variables")
    out: Dict[Monomial, Fraction] = {}
    for mu, c in a.terms.items():
        for nu, d in b.terms.items():
            if mu.divides(nu):
                key = Monomial(tuple(y - x for x, y in zip(mu.exponents, nu.exponents)))
                out[key] = out.get(key, Fraction(0)) + c * d
    return LocalCohomologyElement(b.n, out)


def residue_pair(a: Polynomial, b: LocalCohomologyElement) -> Fraction:
    """Coefficient of x^{-1} in a·b."""
    if a.n != b.n:
        raise InputError(f"pairing {a.n}-variable polynomial with {b.n}-variable class")
    return sum((c * b.coefficient(mu) for mu, c in a.terms.items()), Fraction(0))


def apply_partial(i: int, b: LocalCohomologyElement) -> LocalCohomologyElement:
    """∂_i x^{-ν-1} = -(ν_i + 1) x^{-(ν+e_i)-1} (0-based i)."""
    out: Dict[Monomial, Fraction] = {}
    for nu, c in b.terms.items():
        exps = list(nu.exponents)
        factor = -(exps[i] + 1)
        exps[i] += 1
        out[Monomial(tuple(exps))] = c * factor
    return LocalCohomologyElement(b.n, out)


def apply_variable(i: int, b: LocalCohomologyElement) -> LocalCohomologyElement:
    """x_i acting on B (0-based i)."""
    exps = [0] * b.n
    exps[i] = 1
    return act(Polynomial(b.n, {tuple(exps): 1}), b)


def polynomial_partial(i: int, a: Polynomial) -> Polynomial:
    """∂_i acting on A (0-based i)."""
    _, gens = polynomial_ring(a.n)
    return from_ring_element(to_ring_element(a).diff(gens[i]), a.n)


def _require_quasihomogeneous(f: Polynomial, w: WeightSystem) -> None:
    if any(weighted_order(m, w) != 1 for m in f.monomials()):
        raise InputError("graded pairing data needs the quasihomogeneous principal part")


def _bracket_on_b(fi: Polynomial, fj: Polynomial, i: int, j: int,
                  b: LocalCohomologyElement) -> LocalCohomologyElement:
    """(f_i ∂_j - f_j ∂_i) b."""
    return act(fi, apply_partial(j, b)) - act(fj, apply_partial(i, b))


def _degree(alpha: Union[DegreeIndex, int, Fraction]) -> Fraction:
    return alpha.value if isinstance(alpha, DegreeIndex) else Fraction(alpha)


def bbar_piece(f: Polynomial, w: WeightSystem, alpha: Union[DegreeIndex, int, Fraction]) -> BbarPiece:
    """⋂_{i<j} Ker(f_i∂_j - f_j∂_i) on B^α."""
    _require_quasihomogeneous(f, w)
    degree = _degree(alpha)
    basis = enumerate_monomials(w, degree)
    if not basis:
        return BbarPiece(degree, ())
    partials = partial_derivatives(f)
    images = []
    for i, j in combinations(range(f.n), 2):
        images.append([
            _bracket_on_b(partials[i], partials[j], i, j, LocalCohomologyElement.basis_element(nu))
            for nu in basis
        ])
    # One row per (pair, target monomial), one column per basis element of B^α.
    rows: List[List[Fraction]] = []
    for pair_images in images:
        targets = sorted({nu for img in pair_images for nu in img.terms})
        for target in targets:
            rows.append([img.coefficient(target) for img in pair_images])
    kernel = nullspace(QMatrix.from_rows(rows, cols=len(basis)))
    elements = tuple(
        LocalCohomologyElement(f.n, {nu: c for nu, c in zip(basis, vec) if c})
        for vec in kernel
    )
    logger.debug(f"B̄ at degree {degree}: {len(basis)} monomials, kernel dim {len(elements)}")
    return BbarPiece(degree, elements)


def abar_piece(f: Polynomial, w: WeightSystem, alpha: Union[DegreeIndex, int, Fraction]) -> AbarPiece:
    """A^α modulo Σ_{i<j} Im(f_i∂_j - f_j∂_i); non-pivot monomials represent the quotient."""
    _require_quasihomogeneous(f, w)
    degree = _degree(alpha)
    basis = enumerate_monomials(w, degree)
    if not basis:
        return AbarPiece(degree, ())
    column = {m: k for k, m in enumerate(basis)}
    partials = partial_derivatives(f)
    rows: List[List[Fraction]] = []
    for i, j in combinations(range(f.n), 2):
        # the bracket raises degree by 1 - w_i - w_j
        source = degree - 1 + w.weights[i] + w.weights[j]
        for mu in enumerate_monomials(w, source):
            a = Polynomial(f.n, {mu: 1})
            image = partials[i] * polynomial_partial(j, a) - partials[j] * polynomial_partial(i, a)
            if image.is_zero:
                continue
            row = [Fraction(0)] * len(basis)
            for m, c in image.terms.items():
                row[column[m]] = c
            rows.append(row)
    pivots = set(pivot_columns(QMatrix.from_rows(rows, cols=len(basis))))
    return AbarPiece(degree, tuple(m for k, m in enumerate(basis) if k not in pivots))


def pairing_perfectness(f: Polynomial, w: WeightSystem, alpha: Union[DegreeIndex, int, Fraction]) -> bool:
    """Ā_f^α and B̄_f^α have equal dimension and a nonsingular pairing matrix."""
    return _pieces_pair_perfectly(f, abar_piece(f, w, alpha), bbar_piece(f, w, alpha))


def _pieces_pair_perfectly(f: Polynomial, a_piece: AbarPiece, b_piece: BbarPiece) -> bool:
    if a_piece.dim != b_piece.dim:
        logger.warning(f"dim Ā = {a_piece.dim} but dim B̄ = {b_piece.dim} at degree {a_piece.degree}")
        return False
    if a_piece.dim == 0:
        return True
    matrix = QMatrix.from_rows([
        [residue_pair(Polynomial(f.n, {m: 1}), b) for b in b_piece.basis]
        for m in a_piece.representatives
    ])
    return rank(matrix) == a_piece.dim


def mf_membership(f: Polynomial, w: WeightSystem, a: Polynomial, k: int) -> bool:
    """a/f^k (mod A) lies in M_f iff a kills every element of B̄_f^k."""
    if k < 1:
        raise InputError(f"pole order k must be >= 1, got {k}")
    return all(act(a, b).is_zero for b in bbar_piece(f, w, k).basis)


def multiplication_surjective(f: Polynomial, w: WeightSystem, k: int) -> bool:
    """f : B̄_f^{k+1} -> B̄_f^k is onto."""
    upper = bbar_piece(f, w, k + 1)
    lower = bbar_piece(f, w, k)
    if lower.dim == 0:
        return True
    images = [act(f, b) for b in upper.basis]
    support = sorted({nu for img in images for nu in img.terms})
    if not support:
        return False
    matrix = QMatrix.from_rows([[img.coefficient(nu) for nu in support] for img in images], cols=len(support))
    return rank(matrix) == lower.dim


def pairing_summary(f: Polynomial, w: WeightSystem,
                    degrees: Sequence[DegreeIndex]) -> List[Dict[str, object]]:
    """Per-degree dims of Ā and B̄ with the perfectness flag."""
    rows = []
    for degree in degrees:
        a_piece = abar_piece(f, w, degree)
        b_piece = bbar_piece(f, w, degree)
        rows.append({
            'degree': degree,
            'abar_dim': a_piece.dim,
            'bbar_dim': b_piece.dim,
            'perfect': _pieces_pair_perfectly(f, a_piece, b_piece),
        })
    return rows
