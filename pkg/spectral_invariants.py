"""Numeric invariants derived from the Milnor algebra: α_f, b-function, r0, E_f."""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Tuple

from sympy import Rational as SympyRational, Symbol, prod

from exceptions import InconsistencyError
from graded_jacobian import MilnorData, alpha_f, beta_f
from poly_frontend import WeightSystem

logger = logging.getLogger(__name__)


class SingularityClass(str, Enum):
    RATIONAL = "Rational"
    DU_BOIS_ONLY = "DuBoisOnly"
    NEITHER = "Neither"


@dataclass(frozen=True)
class BFunction:
    """b_f(s) stored as roots of b_f(-s) with multiplicity."""

    roots: Tuple[Tuple[Fraction, int], ...]

    def root_list(self) -> List[Fraction]:
        out: List[Fraction] = []
        for root, mult in self.roots:
            out.extend([root] * mult)
        return out

    def as_expr(self, s: Optional[Symbol] = None):
        """b_f(s) as a sympy expression."""
        s = s or Symbol('s')
        return prod((s + SympyRational(r.numerator, r.denominator)) ** m for r, m in self.roots)

    def __str__(self) -> str:
        parts = []
        for root, mult in self.roots:
            factor = f"(s+{root})"
            parts.append(factor if mult == 1 else f"{factor}^{mult}")
        return "".join(parts)


@dataclass(frozen=True)
class SpectralReport:
    alpha_f: Fraction
    beta_f: Fraction
    b_roots: Tuple[Fraction, ...]
    classification: SingularityClass
    eigenspace_dims: Dict[Fraction, int]
    unipotent_hodge_dims: Dict[int, int]
    r0: Optional[int]
    dim_Ef: int
    quotient_generated: Optional[int]


def minimal_exponent(w: WeightSystem) -> Fraction:
    return alpha_f(w)


def bfunction(md: MilnorData) -> BFunction:
    """(s+1) times Π (s+α) over the distinct exponents α."""
    roots = Counter(set(md.exponents))
    roots[Fraction(1)] += 1
    return BFunction(tuple(sorted(roots.items())))


def classify_singularity(alpha: Fraction) -> SingularityClass:
    if alpha > 1:
        return SingularityClass.RATIONAL
    if alpha == 1:
        return SingularityClass.DU_BOIS_ONLY
    return SingularityClass.NEITHER


def monodromy_eigenspace_dims(md: MilnorData) -> Dict[Fraction, int]:
    """Exponent count per residue class mod 1."""
    dims: Counter = Counter(a - floor(a) for a in md.exponents)
    return dict(sorted(dims.items()))


def unipotent_hodge_dims(md: MilnorData) -> Dict[int, int]:
    """Milnor dimension at each integer degree p, nonzero values only."""
    dims: Counter = Counter(int(a) for a in md.exponents if a.denominator == 1)
    return dict(sorted(dims.items()))


def r0_and_quotient_level(md: MilnorData) -> Tuple[Optional[int], Optional[int]]:
    """r0 = 1 + lowest integer degree carrying Milnor classes; level n - r0."""
    unipotent = unipotent_hodge_dims(md)
    if not unipotent:
        return None, None
    r0 = 1 + min(unipotent)
    w = md.weights
    if w.is_homogeneous:
        d = w.weights[0].denominator
        lower = Fraction(md.n, d) + 1
        if not (r0 - 1 < lower <= r0):
            raise InconsistencyError(f"r0 = {r0} violates {r0 - 1} < n/d + 1 = {lower} <= r0")
    return r0, md.n - r0


def invariant_dim(md: MilnorData) -> int:
    """Integer exponents counted with multiplicity."""
    return sum(1 for a in md.exponents if a.denominator == 1)


def spectral_report(md: MilnorData) -> SpectralReport:
    w = md.weights
    alpha = minimal_exponent(w)
    r0, level = r0_and_quotient_level(md)
    eigen = monodromy_eigenspace_dims(md)
    dim_e = invariant_dim(md)
    if eigen.get(Fraction(0), 0) != dim_e:
        raise InconsistencyError("eigenvalue-1 dimension disagrees with the integer exponent count")
    report = SpectralReport(
        alpha_f=alpha,
        beta_f=beta_f(w),
        b_roots=tuple(bfunction(md).root_list()),
        classification=classify_singularity(alpha),
        eigenspace_dims=eigen,
        unipotent_hodge_dims=unipotent_hodge_dims(md),
        r0=r0,
        dim_Ef=dim_e,
        quotient_generated=level,
    )
    logger.info(f"α_f = {alpha}, {report.classification.value}, r0 = {r0}, dim E_f = {dim_e}")
    return report
