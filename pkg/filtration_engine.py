"""Hodge filtration slices of A[1/f], A[1/f]/A and M_f, and generating levels.

Every span question is reduced to linear algebra on numerators over a
common pole f^P. The generators of pole order k are x^μ/f^{k+1} with
deg(x^μ) >= k+1 (strictly greater for M_f), and F_j D applied to them is
the span of ∂^ν(x^μ/f^{k+1}) with |ν| <= j, rewritten with
∂_i(b/f^P) = (f ∂_i b - P b f_i)/f^{P+1}.

A numerator of U-degree above β_f = n - α_f is already reachable from
lower pole orders through k f_i a/f^{k+1} = ∂_i a/f^k - ∂_i(a/f^k) and the
surjectivity of the Jacobian map above β_f, so certification only ever
looks at numerators of degree <= τ, with everything above τ dropped.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from config import DEFAULT_CERTIFY_MARGIN, DEFAULT_MAX_LEVEL
from exact_core import EchelonBasis
from exceptions import InconsistencyError, InputError, NotSemiQuasihomogeneousError, TruncationError
from graded_jacobian import (
    DegreeIndex,
    alpha_f,
    beta_f,
    count_monomials,
    enumerate_monomials,
    grid_degrees,
    milnor_piece,
    monomials_up_to,
    scaled_degree,
)
from poly_frontend import (
    ClassificationKind,
    Polynomial,
    WeightSystem,
    classify,
    polynomial_ring,
    to_ring_element,
)

logger = logging.getLogger(__name__)


class ModuleTag(str, Enum):
    MPRIME = "Mprime"
    MDOUBLEPRIME = "Mdoubleprime"
    M = "M"


@dataclass(frozen=True)
class ModuleElement:
    """numerator / f^pole_order."""

    numerator: Polynomial
    pole_order: int

    def weighted_degree(self, w: WeightSystem) -> Optional[Fraction]:
        """deg(numerator) - pole order when the numerator is homogeneous."""
        degrees = {
            Fraction(scaled_degree(m.exponents, w.scaled), w.common_denominator)
            for m in self.numerator.monomials()
        }
        if len(degrees) != 1:
            return None
        return degrees.pop() - self.pole_order


@dataclass(frozen=True)
class Cutoffs:
    p_max: int
    delta_max: Fraction
    pole_max: int


@dataclass
class FilteredPieceTable:
    module_tag: ModuleTag
    entries: Dict[Tuple[int, DegreeIndex], int]
    cutoffs: Cutoffs

    def dim(self, p: int, delta: DegreeIndex) -> int:
        return self.entries[(p, delta)]


@dataclass(frozen=True)
class CertifiedUpTo:
    cutoffs: Cutoffs


@dataclass(frozen=True)
class WitnessFailure:
    p: int
    delta: Fraction
    witness: ModuleElement


@dataclass(frozen=True)
class Inconclusive:
    reason: str


Verdict = Union[CertifiedUpTo, WitnessFailure, Inconclusive]


@dataclass
class LevelCertificate:
    module_tag: ModuleTag
    bound: int
    verdict: Verdict
    trace: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return isinstance(self.verdict, CertifiedUpTo)


@dataclass
class ExactnessVerdict:
    module_tag: ModuleTag
    expected_level: int
    exact: Optional[bool]
    upper: LevelCertificate
    lower: Optional[LevelCertificate]


# --- closed forms ----------------------------------------------------------------

def closed_form_levels(n: int, alpha: Fraction) -> Tuple[int, int]:
    """k0 = [n - α_f] - 1 and k1 = max{k : k < n - α_f - 1}."""
    if n < 2:
        raise InputError("n must be at least 2")
    top = n - Fraction(alpha)
    k0 = floor(top) - 1
    k1 = floor(top - 1)
    while not k1 < top - 1:
        k1 -= 1
    return k0, k1


def cone_generating_level(dim_x: int, d: int) -> int:
    """Generating level of M_f for a homogeneous cone of degree d."""
    if d < 2 or dim_x < 2:
        raise InputError("need d >= 2 and dim X >= 2")
    _, k1 = closed_form_levels(dim_x, Fraction(dim_x, d))
    middle = dim_x - Fraction(dim_x, d) - 1
    if not (k1 < middle <= k1 + 1):
        raise InconsistencyError(f"k1 = {k1} is not sandwiched around {middle}")
    return k1


def generating_bound(tag: ModuleTag, n: int, alpha: Fraction) -> int:
    """Largest pole index the generator sum needs (k1 clamped at 0)."""
    k0, k1 = closed_form_levels(n, alpha)
    return k0 if tag != ModuleTag.M else max(k1, 0)


def default_cutoffs(w: WeightSystem, p_max: Optional[int] = None,
                    delta_max: Optional[Fraction] = None) -> Cutoffs:
    k0, _ = closed_form_levels(w.n, alpha_f(w))
    if p_max is None:
        p_max = max(DEFAULT_MAX_LEVEL, k0 + DEFAULT_CERTIFY_MARGIN)
    if delta_max is None:
        delta_max = beta_f(w) + k0 + 2
    return Cutoffs(p_max=p_max, delta_max=Fraction(delta_max), pole_max=p_max + 1)


# --- numerators over a common pole ------------------------------------------------

def _multi_indices(n: int, order: int) -> List[Tuple[int, ...]]:
    """All ν with |ν| <= order, by increasing |ν|."""
    out: List[Tuple[int, ...]] = [(0,) * n]
    frontier = [(0,) * n]
    for _ in range(order):
        nxt = []
        seen = set()
        for nu in frontier:
            for i in range(n):
                child = nu[:i] + (nu[i] + 1,) + nu[i + 1:]
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        out.extend(sorted(nxt))
        frontier = sorted(nxt)
    return out


class _Numerators:
    """Numerators of ∂^ν(x^μ/f^{k+1}) over f^target for one polynomial f."""

    def __init__(self, f: Polynomial, w: WeightSystem):
        self.f = f
        self.w = w
        self.v = w.common_denominator
        self.sw = w.scaled
        self.ring, self.gens = polynomial_ring(f.n)
        self.poly = to_ring_element(f)
        self.partials = [self.poly.diff(x) for x in self.gens]
        self._powers = [self.ring.one]
        self._derivatives: Dict[Tuple[Tuple[int, ...], int, Tuple[int, ...]], Tuple[object, int]] = {}

    def power(self, e: int):
        while len(self._powers) <= e:
            self._powers.append(self._powers[-1] * self.poly)
        return self._powers[e]

    def derivative(self, mu: Tuple[int, ...], k: int, nu: Tuple[int, ...]):
        """(numerator, pole) of ∂^ν(x^μ/f^{k+1})."""
        key = (mu, k, nu)
        cached = self._derivatives.get(key)
        if cached is not None:
            return cached
        if not any(nu):
            result = (self.ring.one.mul_monom(mu), k + 1)
        else:
            i = next(j for j, e in enumerate(nu) if e)
            lower = nu[:i] + (nu[i] - 1,) + nu[i + 1:]
            num, pole = self.derivative(mu, k, lower)
            result = (self.poly * num.diff(self.gens[i]) - pole * num * self.partials[i], pole + 1)
        self._derivatives[key] = result
        return result

    def over_pole(self, mu: Tuple[int, ...], k: int, nu: Tuple[int, ...], target: int):
        num, pole = self.derivative(mu, k, nu)
        return num * self.power(target - pole)

    def scaled_degree(self, exps: Sequence[int]) -> int:
        return scaled_degree(exps, self.sw)

    def row(self, element, columns: Dict[Tuple[int, ...], int], cap: int) -> Dict[int, Fraction]:
        """Sparse coordinates of a ring element, dropping terms above scaled degree `cap`."""
        out: Dict[int, Fraction] = {}
        for exps, c in element.items():
            if self.scaled_degree(exps) <= cap:
                out[columns[exps]] = Fraction(int(c.numerator), int(c.denominator))
        return out


def _generator_rows(num: _Numerators, pole: int, strict: bool,
                    keep_degree, k_limit: Optional[int] = None) -> Iterator[Tuple[Tuple[int, ...], int, Tuple[int, ...]]]:
    """(μ, k, ν) for the generators of Σ_{k < pole} F_{pole-1-k}D G_k over f^pole.

    `keep_degree(lowest)` filters on the scaled lower bound of the numerator
    degree, deg(μ) + (pole - 1 - k) - α_w(ν), which is exact for
    quasihomogeneous f.
    """
    v, sw, n = num.v, num.sw, num.f.n
    k_top = pole - 1 if k_limit is None else min(pole - 1, k_limit)
    for k in range(k_top + 1):
        order = pole - 1 - k
        floor_scaled = v * (k + 1) + (1 if strict else 0)
        for nu in _multi_indices(n, order):
            shift = v * order - sum(s * e for s, e in zip(sw, nu))
            for mu_degree in _mu_degrees(num, floor_scaled, shift, keep_degree):
                for mu in enumerate_monomials(num.w, DegreeIndex(mu_degree, v)):
                    yield mu.exponents, k, nu


def _mu_degrees(num: _Numerators, floor_scaled: int, shift: int, keep_degree) -> Iterator[int]:
    lowest = max(floor_scaled, sum(num.sw))
    top = keep_degree.upper - shift
    for s in range(lowest, top + 1):
        if keep_degree(s + shift):
            yield s


class _DegreeFilter:
    """Accepts scaled degrees in a set, or everything up to `upper`."""

    def __init__(self, upper: int, exact: Optional[Set[int]] = None):
        self.upper = upper
        self.exact = exact

    def __call__(self, scaled: int) -> bool:
        if scaled > self.upper:
            return False
        return self.exact is None or scaled in self.exact


# --- graded slices ------------------------------------------------------------------

def _require_quasihomogeneous(f: Polynomial, w: WeightSystem) -> None:
    kind = classify(f, w).kind
    if kind != ClassificationKind.QUASIHOMOGENEOUS:
        raise InputError(f"graded slices need a quasihomogeneous polynomial, got {kind.value}")


def _pole_for(tag: ModuleTag, p: int) -> int:
    return p if tag == ModuleTag.M else p + 1


def hodge_piece(f: Polynomial, w: WeightSystem, tag: ModuleTag, p: int,
                delta: Union[DegreeIndex, Fraction, int], cutoffs: Optional[Cutoffs] = None,
                k_max: Optional[int] = None) -> int:
    """dim of the degree-δ slice of F_p of the module (f quasihomogeneous).

    `k_max` restricts the generator sum to pole indices k <= k_max.
    """
    _require_quasihomogeneous(f, w)
    cutoffs = cutoffs or default_cutoffs(w)
    delta = delta if isinstance(delta, DegreeIndex) else DegreeIndex.of(delta, w)
    pole = _pole_for(tag, p)
    if p > cutoffs.p_max or delta.value > cutoffs.delta_max or pole > cutoffs.pole_max:
        raise TruncationError(
            f"F_{p} at degree {delta} is beyond cutoffs (p <= {cutoffs.p_max}, "
            f"δ <= {cutoffs.delta_max}, pole <= {cutoffs.pole_max})"
        )
    if p < 0 or pole <= 0:
        return 0
    v = w.common_denominator
    target = DegreeIndex(delta.scaled + v * pole, v)
    ambient = count_monomials(w, target)
    if ambient == 0:
        return 0
    quotient = tag != ModuleTag.MPRIME
    strict = tag == ModuleTag.M
    top_family_present = k_max is None or k_max >= pole - 1
    full = delta.scaled > 0 if strict else delta.scaled >= 0
    if top_family_present and full:
        # x^μ/f^pole alone already spans the slice
        return ambient - (count_monomials(w, delta) if quotient else 0)

    num = _Numerators(f, w)
    columns = {m.exponents: j for j, m in enumerate(enumerate_monomials(w, target))}
    basis = EchelonBasis()
    base_rank = 0
    if quotient:
        for kappa in enumerate_monomials(w, delta):
            basis.add(num.row(num.power(pole).mul_monom(kappa.exponents), columns, target.scaled))
        base_rank = basis.rank
    keep = _DegreeFilter(target.scaled, {target.scaled})
    for mu, k, nu in _generator_rows(num, pole, strict, keep, k_limit=k_max):
        basis.add(num.row(num.over_pole(mu, k, nu, pole), columns, target.scaled))
    dim = basis.rank - base_rank
    logger.debug(f"F_{p} {tag.value} at δ={delta}: dim {dim} of {ambient}")
    return dim


def both_formulas_agree(f: Polynomial, w: WeightSystem, tag: ModuleTag, p: int,
                        delta: Union[DegreeIndex, Fraction, int],
                        cutoffs: Optional[Cutoffs] = None) -> bool:
    """The generator sum over all k equals the sum truncated at k0 (k1 for M)."""
    bound = generating_bound(tag, w.n, alpha_f(w))
    full = hodge_piece(f, w, tag, p, delta, cutoffs)
    restricted = hodge_piece(f, w, tag, p, delta, cutoffs, k_max=bound)
    if full != restricted:
        logger.warning(f"{tag.value} F_{p} at δ={delta}: full span {full}, truncated span {restricted}")
    return full == restricted


def delta_range(w: WeightSystem, p: int, tag: ModuleTag, delta_max: Fraction) -> List[DegreeIndex]:
    """Grid degrees δ at which F_p can be nonzero, up to delta_max."""
    pole = _pole_for(tag, p)
    lowest = max(-(pole - 1) * max(w.weights), alpha_f(w) - pole)
    return grid_degrees(w, lowest, delta_max)


def build_piece_table(f: Polynomial, w: WeightSystem, tag: ModuleTag, cutoffs: Cutoffs,
                      p_limit: Optional[int] = None,
                      delta_limit: Optional[Fraction] = None) -> FilteredPieceTable:
    """Dimensions of F_p at every grid δ within the limits (default: the cutoffs)."""
    p_limit = cutoffs.p_max if p_limit is None else min(p_limit, cutoffs.p_max)
    delta_limit = cutoffs.delta_max if delta_limit is None else min(Fraction(delta_limit), cutoffs.delta_max)
    entries: Dict[Tuple[int, DegreeIndex], int] = {}
    for p in range(p_limit + 1):
        for delta in delta_range(w, p, tag, delta_limit):
            entries[(p, delta)] = hodge_piece(f, w, tag, p, delta, cutoffs)
    logger.info(f"Built {tag.value} table with {len(entries)} entries")
    return FilteredPieceTable(tag, entries, cutoffs)


# --- Jacobian-side checks -------------------------------------------------------------

def _principal(f: Polynomial, w: WeightSystem) -> Polynomial:
    classification = classify(f, w)
    if classification.kind == ClassificationKind.INVALID:
        raise NotSemiQuasihomogeneousError(classification.diagnostics)
    return classification.principal


def surjectivity_check(f: Polynomial, w: WeightSystem, alpha: Union[Fraction, int]) -> bool:
    """Σ f_i onto U^γ A at every grid γ in [α, α+1]; α must exceed β_f."""
    alpha = Fraction(alpha)
    if alpha <= beta_f(w):
        raise InputError(f"surjectivity is only claimed above β_f = {beta_f(w)}, got {alpha}")
    principal = _principal(f, w)
    return all(milnor_piece(principal, w, d)[1] == 0 for d in grid_degrees(w, alpha, alpha + 1))


def top_witness(f_principal: Polynomial, w: WeightSystem) -> bool:
    """The Milnor algebra is nonzero at the socle degree β_f."""
    return milnor_piece(f_principal, w, beta_f(w))[1] > 0


def milnor_range_dims(f_principal: Polynomial, w: WeightSystem, lo: Union[Fraction, int],
                      hi: Union[Fraction, int]) -> Dict[DegreeIndex, int]:
    return {d: milnor_piece(f_principal, w, d)[1] for d in grid_degrees(w, lo, hi)}


def graded_image_dims(f: Polynomial, w: WeightSystem, top: Union[Fraction, int]) -> Dict[DegreeIndex, int]:
    """U-graded dimensions of Σ_{i<j} Im(f_i∂_j - f_j∂_i) up to degree `top`."""
    num = _Numerators(f, w)
    v = num.v
    cap = floor(Fraction(top) * v)
    ordered = monomials_up_to(w, Fraction(top))
    columns = {m.exponents: j for j, m in enumerate(ordered)}
    basis = EchelonBasis()
    for i in range(f.n):
        for j in range(i + 1, f.n):
            raise_by = v - num.sw[i] - num.sw[j]
            for mu in monomials_up_to(w, Fraction(cap - raise_by, v)):
                mono = num.ring.one.mul_monom(mu.exponents)
                image = num.partials[i] * mono.diff(num.gens[j]) - num.partials[j] * mono.diff(num.gens[i])
                if image:
                    basis.add(num.row(image, columns, cap))
    dims = {d: 0 for d in grid_degrees(w, alpha_f(w), Fraction(cap, v))}
    for col in basis.pivot_columns:
        degree = DegreeIndex(num.scaled_degree(ordered[col].exponents), v)
        dims[degree] += 1
    return dims


def strictness_check(f: Polynomial, w: WeightSystem, top: Optional[Union[Fraction, int]] = None) -> bool:
    """Graded image dimensions for f agree with those of its principal part."""
    top = beta_f(w) + 1 if top is None else Fraction(top)
    principal = _principal(f, w)
    for_f = graded_image_dims(f, w, top)
    for_principal = graded_image_dims(principal, w, top)
    mismatched = [str(d) for d in for_f if for_f[d] != for_principal[d]]
    if mismatched:
        logger.warning(f"Graded images differ at degrees {', '.join(mismatched)}")
    return not mismatched


# --- generating level certification -------------------------------------------------

def _reduction_threshold(tag: ModuleTag, p: int, w: WeightSystem) -> Fraction:
    v = w.common_denominator
    if tag == ModuleTag.M:
        return max(Fraction(p + 1), beta_f(w))
    return max(Fraction(p + 1) - Fraction(1, v), beta_f(w))


def _generator_degrees(tag: ModuleTag, p: int, w: WeightSystem) -> List[DegreeIndex]:
    """Degrees of pole-p generators that the reduction identity does not settle."""
    return grid_degrees(w, p + 1, beta_f(w), include_lo=tag != ModuleTag.M)


def _check_level(num: _Numerators, tag: ModuleTag, p: int, graded: bool,
                 trace: List[str]) -> Optional[WitnessFailure]:
    """Is every pole-p generator in Σ_{k<p} F_{p-k}D G_k (mod A unless M')?"""
    w = num.w
    v = num.v
    degrees = _generator_degrees(tag, p, w)
    if not degrees:
        trace.append(f"p={p}: every generator has degree > β_f, reduced by the Jacobian identity")
        return None
    tau = _reduction_threshold(tag, p, w)
    cap = floor(tau * v)
    pole = p + 1
    strict = tag == ModuleTag.M
    needed = {d.scaled for d in degrees}
    keep = _DegreeFilter(cap, needed if graded else None)
    ordered = monomials_up_to(w, Fraction(cap, v))
    columns = {m.exponents: j for j, m in enumerate(ordered)}
    basis = EchelonBasis()
    if tag != ModuleTag.MPRIME:
        for kappa in monomials_up_to(w, Fraction(cap, v) - pole):
            if keep(num.scaled_degree(kappa.exponents) + v * pole):
                basis.add(num.row(num.power(pole).mul_monom(kappa.exponents), columns, cap))
    rows = 0
    for mu, k, nu in _generator_rows(num, pole, strict, keep, k_limit=p - 1):
        basis.add(num.row(num.over_pole(mu, k, nu, pole), columns, cap))
        rows += 1
    targets = [m for d in degrees for m in enumerate_monomials(w, d)]
    trace.append(
        f"p={p}: {len(targets)} generators at degrees {', '.join(str(d) for d in degrees)}; "
        f"{rows} spanning numerators, rank {basis.rank} over {len(ordered)} monomials of degree <= {tau}"
    )
    for lam in targets:
        if not basis.contains({columns[lam.exponents]: 1}):
            delta = Fraction(num.scaled_degree(lam.exponents), v) - pole
            witness = ModuleElement(Polynomial(w.n, {lam: 1}), pole)
            trace.append(f"p={p}: x^{lam.exponents}/f^{pole} is outside the span")
            return WitnessFailure(p, delta, witness)
    return None


def certify_level(f: Polynomial, w: WeightSystem, tag: ModuleTag, r: int,
                  cutoffs: Optional[Cutoffs] = None,
                  margin: int = DEFAULT_CERTIFY_MARGIN) -> LevelCertificate:
    """Try to prove the module is generated at level <= r."""
    if r < 0:
        raise InputError(f"level bound must be >= 0, got {r}")
    classification = classify(f, w)
    if classification.kind == ClassificationKind.INVALID:
        raise NotSemiQuasihomogeneousError(classification.diagnostics)
    graded = classification.kind == ClassificationKind.QUASIHOMOGENEOUS
    cutoffs = cutoffs or default_cutoffs(w)
    closed = generating_bound(tag, w.n, alpha_f(w))
    trace: List[str] = [
        f"{tag.value}, r={r}, closed-form level {closed}, "
        f"{'graded slices' if graded else 'U-truncated spans with the full polynomial'}"
    ]
    num = _Numerators(f, w)
    for p in range(r + 1, max(closed, r) + margin + 1):
        if p > closed:
            trace.append(f"p={p}: above the closed-form level, reduced by the Jacobian identity")
            continue
        if p > cutoffs.p_max or p + 1 > cutoffs.pole_max:
            reason = f"level {p} exceeds cutoffs p_max={cutoffs.p_max}, pole_max={cutoffs.pole_max}"
            logger.warning(f"{tag.value} r={r}: inconclusive, {reason}")
            return LevelCertificate(tag, r, Inconclusive(reason), trace)
        if beta_f(w) - p - 1 > cutoffs.delta_max:
            reason = f"generator degrees at p={p} exceed δ_max={cutoffs.delta_max}"
            logger.warning(f"{tag.value} r={r}: inconclusive, {reason}")
            return LevelCertificate(tag, r, Inconclusive(reason), trace)
        failure = _check_level(num, tag, p, graded, trace)
        if failure is not None:
            logger.info(f"{tag.value} level <= {r} fails at p={p}, δ={failure.delta}")
            return LevelCertificate(tag, r, failure, trace)
    logger.info(f"{tag.value} certified generated at level <= {r}")
    return LevelCertificate(tag, r, CertifiedUpTo(cutoffs), trace)


def exactness_probe(f_principal: Polynomial, w: WeightSystem, tag: ModuleTag,
                    cutoffs: Optional[Cutoffs] = None) -> ExactnessVerdict:
    """Certify the closed-form level and refute the level just below it."""
    _require_quasihomogeneous(f_principal, w)
    expected = generating_bound(tag, w.n, alpha_f(w))
    upper = certify_level(f_principal, w, tag, expected, cutoffs)
    lower = certify_level(f_principal, w, tag, expected - 1, cutoffs) if expected > 0 else None
    certificates = [c for c in (upper, lower) if c is not None]
    if any(isinstance(c.verdict, Inconclusive) for c in certificates):
        exact = None
    else:
        exact = upper.certified and (lower is None or isinstance(lower.verdict, WitnessFailure))
    return ExactnessVerdict(tag, expected, exact, upper, lower)
