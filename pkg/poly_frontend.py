"""Polynomial input, weight systems and (semi)quasihomogeneous classification."""

import re
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from math import lcm
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.rings import ring, PolyRing, PolyElement

from config import MAX_VARIABLES
from exact_core import in_span, rank, QMatrix, to_fraction, to_qq
from exceptions import (
    InputError,
    NotSemiQuasihomogeneousError,
    PolynomialParseError,
    UnderdeterminedWeightsError,
    WeightValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent vector of x^ν."""

    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) < 2:
            raise InputError("at least two variables are required")
        if any(e < 0 for e in self.exponents):
            raise InputError(f"negative exponent in {self.exponents}")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @classmethod
    def one(cls, n: int) -> 'Monomial':
        return cls((0,) * n)

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: 'Monomial') -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __str__(self) -> str:
        factors = []
        for i, e in enumerate(self.exponents, 1):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        return "*".join(factors) if factors else "1"


Number = Union[int, Fraction]


class Polynomial:
    """Exact polynomial in x1..xn with rational coefficients."""

    __slots__ = ('n', '_terms')

    def __init__(self, n: int, terms: Optional[Mapping[Union[Monomial, Tuple[int, ...]], Number]] = None):
        if n < 2:
            raise InputError("at least two variables are required")
        self.n = n
        cleaned: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(mono, Monomial):
                mono = Monomial(tuple(mono))
            if mono.n != n:
                raise InputError(f"monomial {mono} does not have {n} variables")
            coeff = Fraction(coeff)
            if coeff:
                cleaned[mono] = cleaned.get(mono, Fraction(0)) + coeff
                if not cleaned[mono]:
                    del cleaned[mono]
        self._terms = cleaned

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def monomials(self) -> List[Monomial]:
        return sorted(self._terms, reverse=True)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __add__(self, other: 'Polynomial') -> 'Polynomial':
        return from_ring_element(to_ring_element(self) + to_ring_element(other), self.n)

    def __sub__(self, other: 'Polynomial') -> 'Polynomial':
        return from_ring_element(to_ring_element(self) - to_ring_element(other), self.n)

    def __mul__(self, other: 'Polynomial') -> 'Polynomial':
        return from_ring_element(to_ring_element(self) * to_ring_element(other), self.n)

    def __repr__(self) -> str:
        return f"Polynomial({print_polynomial(self)!r}, n={self.n})"

    def __str__(self) -> str:
        return print_polynomial(self)


@lru_cache(maxsize=None)
def polynomial_ring(n: int) -> Tuple[PolyRing, Tuple[PolyElement, ...]]:
    """sympy ring QQ[x1..xn] and its generators."""
    R, *gens = ring(",".join(f"x{i}" for i in range(1, n + 1)), QQ)
    return R, tuple(gens)


def to_ring_element(f: Polynomial) -> PolyElement:
    R, _ = polynomial_ring(f.n)
    return R.from_dict({m.exponents: to_qq(c) for m, c in f.terms.items()})


def from_ring_element(p: PolyElement, n: int) -> Polynomial:
    return Polynomial(n, {tuple(m): to_fraction(c) for m, c in p.items()})


@dataclass(frozen=True)
class WeightSystem:
    """Rational weights w_i with 0 < w_i <= 1/2."""

    weights: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'weights', tuple(Fraction(w) for w in self.weights))
        if len(self.weights) < 2:
            raise WeightValidationError("at least two weights are required")
        for i, w in enumerate(self.weights, 1):
            if not (0 < w <= Fraction(1, 2)):
                raise WeightValidationError(f"weight w{i} = {w} is outside (0, 1/2]")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def common_denominator(self) -> int:
        return reduce(lcm, (w.denominator for w in self.weights), 1)

    @property
    def scaled(self) -> Tuple[int, ...]:
        """Integers v*w_i."""
        v = self.common_denominator
        return tuple(int(w * v) for w in self.weights)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.weights)) == 1 and self.weights[0].numerator == 1

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.weights)


class ClassificationKind(str, Enum):
    QUASIHOMOGENEOUS = "Quasihomogeneous"
    SEMIQUASIHOMOGENEOUS = "SemiQuasihomogeneous"
    INVALID = "Invalid"


@dataclass(frozen=True)
class QHClassification:
    """Split f = f' + f'' by weighted order."""

    kind: ClassificationKind
    principal: Polynomial
    tail: Polynomial
    diagnostics: str = ""


# --- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r'\s*(?:(?P<var>x(?P<index>\d+))|(?P<int>\d+)|(?P<op>[-+*/^])|(?P<bad>\S))')


class _Token:
    __slots__ = ('kind', 'text', 'position', 'value')

    def __init__(self, kind: str, text: str, position: int, value: Optional[int] = None):
        self.kind = kind
        self.text = text
        self.position = position
        self.value = value


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            break
        if match.group('var') is not None:
            tokens.append(_Token('var', match.group('var'), match.start('var'), int(match.group('index'))))
        elif match.group('int') is not None:
            tokens.append(_Token('int', match.group('int'), match.start('int'), int(match.group('int'))))
        elif match.group('op') is not None:
            tokens.append(_Token(match.group('op'), match.group('op'), match.start('op')))
        else:
            bad = match.group('bad')
            if bad == '.':
                raise PolynomialParseError("non-integer number", match.start('bad'))
            raise PolynomialParseError(f"unexpected character {bad!r}", match.start('bad'))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent over poly := term (('+'|'-') term)*."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.max_variable = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error_position(self) -> int:
        token = self.peek()
        return token.position if token is not None else len(self.text)

    def parse(self) -> List[Tuple[Fraction, Dict[int, int]]]:
        terms = []
        sign = 1
        token = self.peek()
        if token is not None and token.kind in '+-':
            sign = -1 if self.take().kind == '-' else 1
        terms.append(self.term(sign))
        while self.peek() is not None:
            token = self.take()
            if token.kind not in '+-':
                raise PolynomialParseError(f"expected '+' or '-', found {token.text!r}", token.position)
            terms.append(self.term(-1 if token.kind == '-' else 1))
        return terms

    def term(self, sign: int) -> Tuple[Fraction, Dict[int, int]]:
        coeff = Fraction(sign)
        powers: Dict[int, int] = {}
        seen_anything = False
        token = self.peek()
        if token is not None and token.kind == 'int':
            coeff *= self.coefficient()
            seen_anything = True
        while True:
            token = self.peek()
            if token is None:
                break
            if token.kind == '*':
                self.take()
                if self.peek() is None or self.peek().kind != 'var':
                    raise PolynomialParseError("expected a variable after '*'", self.error_position())
                self.factor(powers)
            elif token.kind == 'var':
                self.factor(powers)
            else:
                break
            seen_anything = True
        if not seen_anything:
            raise PolynomialParseError("expected a term", self.error_position())
        return coeff, powers

    def coefficient(self) -> Fraction:
        numerator = self.take().value
        token = self.peek()
        if token is not None and token.kind == '/':
            self.take()
            token = self.peek()
            if token is None or token.kind != 'int':
                raise PolynomialParseError("expected an integer denominator", self.error_position())
            denominator = self.take().value
            if denominator == 0:
                raise PolynomialParseError("zero denominator", token.position)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def factor(self, powers: Dict[int, int]) -> None:
        token = self.take()
        if token.value == 0:
            raise PolynomialParseError("variable index 0 (variables start at x1)", token.position)
        exponent = 1
        if self.peek() is not None and self.peek().kind == '^':
            self.take()
            exp_token = self.peek()
            if exp_token is None or exp_token.kind != 'int':
                raise PolynomialParseError("exponent must be a non-negative integer", self.error_position())
            exponent = self.take().value
        self.max_variable = max(self.max_variable, token.value)
        powers[token.value] = powers.get(token.value, 0) + exponent


def parse_polynomial(text: str, n_hint: Optional[int] = None) -> Polynomial:
    """Parse the ASCII grammar into a Polynomial over x1..xn."""
    if not text or not text.strip():
        raise PolynomialParseError("empty polynomial", 0)
    parser = _Parser(text)
    raw_terms = parser.parse()
    n = parser.max_variable
    if n_hint is not None:
        if n_hint < n:
            raise InputError(f"x{n} used but only {n_hint} variables declared")
        n = n_hint
    if n < 2:
        raise InputError("at least two variables are required (use x1..xn with n >= 2)")
    if n > MAX_VARIABLES:
        raise InputError(f"{n} variables exceeds the limit of {MAX_VARIABLES}")
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for coeff, powers in raw_terms:
        exps = tuple(powers.get(i, 0) for i in range(1, n + 1))
        terms[exps] = terms.get(exps, Fraction(0)) + coeff
    f = Polynomial(n, terms)
    logger.debug(f"Parsed {text!r} into {len(f)} terms in {n} variables")
    return f


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def print_polynomial(f: Polynomial) -> str:
    """Canonical text form; parse_polynomial inverts it."""
    if f.is_zero:
        return "0"
    pieces = []
    for i, (mono, coeff) in enumerate(f.items()):
        magnitude = abs(coeff)
        if mono == Monomial.one(f.n):
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = str(mono)
        else:
            body = f"{_format_coefficient(magnitude)}*{mono}"
        if i == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


# --- weights -----------------------------------------------------------------

def parse_weights(text: str, n: int) -> WeightSystem:
    """Parse 'w1,w2,...' into a WeightSystem of length n."""
    parts = [p.strip() for p in text.split(',') if p.strip()]
    if len(parts) != n:
        raise WeightValidationError(f"expected {n} weights, got {len(parts)}")
    try:
        weights = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise WeightValidationError(f"bad weight list {text!r}: {e}") from e
    return WeightSystem(weights)


def weighted_order(m: Monomial, w: WeightSystem) -> Fraction:
    """Unshifted order α_w(ν) = Σ w_i ν_i."""
    return sum((wi * e for wi, e in zip(w.weights, m.exponents)), Fraction(0))


def infer_weights(f: Polynomial) -> WeightSystem:
    """Solve Σ w_i ν_i = 1 over the monomials of f; the solution must be unique."""
    if f.is_zero:
        raise InputError("cannot infer weights of the zero polynomial")
    monos = f.monomials()
    columns = [[m.exponents[i] for m in monos] for i in range(f.n)]
    result = in_span(columns, [1] * len(monos))
    if not result.contained:
        raise NotSemiQuasihomogeneousError(
            "not quasihomogeneous: no weights give every monomial weighted order 1"
        )
    if rank(QMatrix.from_rows([m.exponents for m in monos], cols=f.n)) < f.n:
        raise UnderdeterminedWeightsError(
            "weights are not determined by the monomials; supply --weights"
        )
    weights = result.coefficients
    for i, wi in enumerate(weights, 1):
        if not (0 < wi <= Fraction(1, 2)):
            raise NotSemiQuasihomogeneousError(f"inferred weight w{i} = {wi} is outside (0, 1/2]")
    logger.info(f"Inferred weights {','.join(str(x) for x in weights)}")
    return WeightSystem(weights)


def classify(f: Polynomial, w: WeightSystem) -> QHClassification:
    """Split f into principal part (order 1) and tail (order > 1)."""
    if w.n != f.n:
        raise WeightValidationError(f"{w.n} weights given for {f.n} variables")
    principal: Dict[Monomial, Fraction] = {}
    tail: Dict[Monomial, Fraction] = {}
    low: List[str] = []
    for mono, coeff in f.items():
        order = weighted_order(mono, w)
        if order == 1:
            principal[mono] = coeff
        elif order > 1:
            tail[mono] = coeff
        else:
            low.append(f"{mono} (order {order})")
    f_principal = Polynomial(f.n, principal)
    f_tail = Polynomial(f.n, tail)
    if low:
        kind = ClassificationKind.INVALID
        diagnostics = "monomials of weighted order < 1: " + ", ".join(low)
    elif f_principal.is_zero:
        kind = ClassificationKind.INVALID
        diagnostics = "no monomial has weighted order 1"
    elif f_tail.is_zero:
        kind = ClassificationKind.QUASIHOMOGENEOUS
        diagnostics = ""
    else:
        kind = ClassificationKind.SEMIQUASIHOMOGENEOUS
        diagnostics = f"{len(f_tail)} higher-order terms"
    return QHClassification(kind, f_principal, f_tail, diagnostics)


def partial_derivatives(f: Polynomial) -> List[Polynomial]:
    """f_1, ..., f_n."""
    p = to_ring_element(f)
    _, gens = polynomial_ring(f.n)
    return [from_ring_element(p.diff(x), f.n) for x in gens]


def euler_identity_holds(f: Polynomial, w: WeightSystem) -> bool:
    """Σ w_i x_i f_i == f."""
    p = to_ring_element(f)
    _, gens = polynomial_ring(f.n)
    euler = sum((to_qq(wi) * x * p.diff(x) for wi, x in zip(w.weights, gens)), p.ring.zero)
    return euler == p
