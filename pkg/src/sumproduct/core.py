"""
Exact scalars and the finite-set containers everything else is built from.

Scalars are |Fraction|s: canonical (positive denominator, coprime numerator), hashable and
totally ordered by value. A set of scalars (|RSet|) is kept sorted and duplicate-free from
construction onwards, so equality of two sets is equality of their element tuples.
Planar sets (|PlanarSet|) house A×B, the diagonal Δ(C) and their sums and differences.

Non-exact quantities (fractional powers, logarithms) only ever enter reported ratios;
they are computed as |Decimal|s with an explicit digit budget.
"""

import hashlib
import re
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Tuple

# The universal scalar.
Rational = Fraction

# A representation function: maps each rational to the (positive) number of pairs realising it.
# Counter returns 0 for anything outside the support, which is exactly the convention we want.
CountMap = Counter

# Default number of significant digits for every non-exact value.
DEFAULT_PRECISION = 40


class SumProductError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SumProductError, ValueError):
    """Malformed textual input (a rational, a set file or a family spec)."""


class DomainError(SumProductError, ValueError):
    """A mathematical precondition is violated, e.g. dividing by a set containing 0."""


class ResourceError(SumProductError, RuntimeError):
    """An exhaustive computation would exceed its configured cap or budget."""


class InfeasibleError(SumProductError, ValueError):
    """A generator was asked for something it cannot produce (e.g. 10 distinct values out of 5)."""


_RATIONAL_PATTERN = re.compile(r"([+-]?\d+)(?:/(\d+))?")


def rational_parse(text: str) -> Fraction:
    """Parse an optionally signed decimal integer or a fraction "p/q" (surrounding whitespace is ignored)."""
    match = _RATIONAL_PATTERN.fullmatch(text.strip())
    if match is None:
        raise ParseError(f'"{text}" is neither an integer nor of the form p/q')
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ZeroDivisionError(f'"{text}" has denominator zero')
    return Fraction(numerator, denominator)


# Inverse to |rational_parse| on canonical forms: "p" for integers, "p/q" otherwise.
def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class RSet:
    """A finite set of rationals, stored as a strictly increasing tuple."""

    elements: Tuple[Fraction, ...] = ()
    _members: FrozenSet[Fraction] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for x, y in zip(self.elements, self.elements[1:]):
            if not x < y:
                raise ValueError(f"RSet elements must be strictly increasing, found {x} before {y}")
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.elements)

    def __contains__(self, value: object) -> bool:
        return value in self._members

    def __str__(self) -> str:
        return "{" + ", ".join(format_rational(x) for x in self.elements) + "}"

    @property
    def members(self) -> FrozenSet[Fraction]:
        return self._members

    def has_zero(self) -> bool:
        return 0 in self._members

    def inverse(self) -> "RSet":
        """The set A^{-1} of reciprocals."""
        if self.has_zero():
            raise DomainError(f"cannot invert {self}: it contains 0")
        return rset_from(1 / x for x in self.elements)

    def without_zero(self) -> "RSet":
        return RSet(tuple(x for x in self.elements if x != 0))

    def positive_part(self) -> "RSet":
        return RSet(tuple(x for x in self.elements if x > 0))

    def to_text(self) -> str:
        """This set in the set file format: one element per line."""
        return "".join(f"{format_rational(x)}\n" for x in self.elements)

    def digest(self) -> str:
        """Content hash of this set, stable across runs and platforms."""
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]


def rset_from(values: Iterable[Fraction | int]) -> RSet:
    """Build the canonical (sorted, deduplicated) set of the given values."""
    return RSet(tuple(sorted({Fraction(v) for v in values})))


Point = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class PlanarSet:
    """A finite set of points of Q²."""

    points: FrozenSet[Point] = frozenset()

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.sorted_points())

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def sorted_points(self) -> List[Point]:
        return sorted(self.points)


def planar_from(points: Iterable[Tuple[Fraction | int, Fraction | int]]) -> PlanarSet:
    return PlanarSet(frozenset((Fraction(x), Fraction(y)) for (x, y) in points))


def cartesian(A: RSet, B: RSet) -> PlanarSet:
    return PlanarSet(frozenset((a, b) for a in A for b in B))


# The diagonal Δ(C) = {(c, c) : c ∈ C}.
def diagonal(C: RSet) -> PlanarSet:
    return PlanarSet(frozenset((c, c) for c in C))


### Non-exact helpers: everything below returns a Decimal rounded to |precision| digits ###


def _as_decimal(value: Fraction | int | Decimal) -> Decimal:
    if isinstance(value, Decimal):
        return value
    value = Fraction(value)
    return Decimal(value.numerator) / Decimal(value.denominator)


def to_decimal(value: Fraction | int | Decimal, precision: int = DEFAULT_PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = precision
        return +_as_decimal(value)


def decimal_power(base: Fraction | int | Decimal, exponent: Fraction | int, precision: int = DEFAULT_PRECISION) -> Decimal:
    """base ** exponent for a non-negative base; integer exponents of exact bases are computed exactly first."""
    exponent = Fraction(exponent)
    if not isinstance(base, Decimal) and exponent.denominator == 1:
        exact = Fraction(base)
        if exact == 0 and exponent < 0:
            raise DomainError(f"negative power {exponent} of zero")
        return to_decimal(exact**exponent.numerator, precision)
    with localcontext() as ctx:
        ctx.prec = precision + 10
        b = _as_decimal(base)
        if b < 0:
            raise DomainError(f"fractional power {exponent} of the negative number {b}")
        if b == 0:
            if exponent < 0:
                raise DomainError(f"negative power {exponent} of zero")
            return Decimal(0) if exponent > 0 else Decimal(1)
        result = b ** (Decimal(exponent.numerator) / Decimal(exponent.denominator))
    return to_decimal(result, precision)


# All logarithms are base 2.
def log2(value: Fraction | int | Decimal, precision: int = DEFAULT_PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = precision + 10
        x = _as_decimal(value)
        if x <= 0:
            raise DomainError(f"logarithm of the non-positive number {x}")
        result = x.ln() / Decimal(2).ln()
    return to_decimal(result, precision)
