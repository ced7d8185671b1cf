"""
Set algebra over the rationals: sum, difference, product and ratio sets, dilates and translates,
representation functions (convolutions and correlations), fibers and (higher) energies.

Conventions.
- The convolution (A*B)(x) counts pairs (a, b) with a∘b = x.
- The correlation (A∘B)(x) counts pairs (a, b) with a = b∘x, that is x = a - b additively
  and x = a/b multiplicatively; in the multiplicative case this is |A ∩ xB|.
  Self-correlations are symmetric (x ↦ -x, resp. x ↦ 1/x), so the fiber A_s has size (A∘A)(s).
- The energy E_α(A) is the sum of (A∘A)(x)^α over the support of A∘A.
"""

import logging
import operator
from collections import Counter
from decimal import Decimal, localcontext
from enum import StrEnum
from fractions import Fraction
from typing import Callable, FrozenSet, Iterable, NamedTuple

from sumproduct.core import (
    DEFAULT_PRECISION,
    CountMap,
    DomainError,
    PlanarSet,
    ResourceError,
    RSet,
    rset_from,
    to_decimal,
)

logger = logging.getLogger(__name__)

# Default maximum of |A|^{2(k-1)} for the fiber-sum oracle.
DEFAULT_FIBER_ORACLE_BUDGET = 10**7


class BinOpKind(StrEnum):
    Sum = "sum"
    Difference = "difference"
    Product = "product"
    Ratio = "ratio"


class Operation(StrEnum):
    Additive = "additive"
    Multiplicative = "multiplicative"


class Orientation(StrEnum):
    Sum = "sum"
    Correlation = "correlation"


class PlanarOpKind(StrEnum):
    Sum = "sum"
    Difference = "difference"
    CoordinateProduct = "coordinate-product"


_BINOPS: dict[BinOpKind, Callable[[Fraction, Fraction], Fraction]] = {
    BinOpKind.Sum: operator.add,
    BinOpKind.Difference: operator.sub,
    BinOpKind.Product: operator.mul,
    BinOpKind.Ratio: operator.truediv,
}


def setop(A: RSet, B: RSet, kind: BinOpKind) -> RSet:
    """The image set {a∘b : a ∈ A, b ∈ B}."""
    if kind == BinOpKind.Ratio and B.has_zero():
        raise DomainError(f"the ratio set A:B needs 0 ∉ B, got B = {B}")
    op = _BINOPS[kind]
    return rset_from(op(a, b) for a in A for b in B)


def sumset(A: RSet, B: RSet) -> RSet:
    return setop(A, B, BinOpKind.Sum)


def difference_set(A: RSet, B: RSet) -> RSet:
    return setop(A, B, BinOpKind.Difference)


def product_set(A: RSet, B: RSet) -> RSet:
    return setop(A, B, BinOpKind.Product)


def ratio_set(A: RSet, B: RSet) -> RSet:
    return setop(A, B, BinOpKind.Ratio)


# Refuse to form a set operation with more than |budget| pairs.
def guard_pairs(budget: int, A: RSet, B: RSet, what: str) -> None:
    if len(A) * len(B) > budget:
        raise ResourceError(f"{what} needs {len(A)}·{len(B)} = {len(A) * len(B)} pairs, over the budget of {budget}")


def dilate(A: RSet, x: Fraction) -> RSet:
    """The dilate xA."""
    if x == 0:
        raise DomainError("cannot dilate by 0")
    return rset_from(a * x for a in A)


def translate(A: RSet, t: Fraction) -> RSet:
    """The translate A + t."""
    return rset_from(a + t for a in A)


def convolution(
    A: RSet, B: RSet, operation: Operation = Operation.Additive, oriented: Orientation = Orientation.Sum
) -> CountMap:
    """The representation function of A∘B as a map from each realised value to its (positive) number of pairs.
    The total mass is always |A|·|B|."""
    if operation == Operation.Additive:
        combine = operator.add if oriented == Orientation.Sum else operator.sub
    else:
        if oriented == Orientation.Correlation and B.has_zero():
            raise DomainError(f"the multiplicative correlation needs 0 ∉ B, got B = {B}")
        combine = operator.mul if oriented == Orientation.Sum else operator.truediv
    counts: CountMap = Counter()
    for a in A:
        for b in B:
            counts[combine(a, b)] += 1
    return counts


def self_correlation(A: RSet, operation: Operation = Operation.Additive) -> CountMap:
    return convolution(A, A, operation, Orientation.Correlation)


class EnergySpec(NamedTuple):
    operation: Operation = Operation.Additive
    # The exponent α ≥ 1: E_α(A) = Σ (A∘A)(x)^α.
    alpha: Fraction = Fraction(2)
    # Significant digits for non-integer α (at least 15).
    precision: int = DEFAULT_PRECISION


def _check_energy_spec(spec: EnergySpec) -> None:
    if Fraction(spec.alpha) < 1:
        raise DomainError(f"energy exponent must be at least 1, got {spec.alpha}")
    if spec.precision < 15:
        raise DomainError(f"energy precision must be at least 15 digits, got {spec.precision}")


# Σ c^α over the given counts: an exact integer for integral α,
# otherwise a Decimal whose absolute error is at most 10^{-30}.
def power_sum(counts: Iterable[int], alpha: Fraction, precision: int = DEFAULT_PRECISION) -> int | Decimal:
    alpha = Fraction(alpha)
    counts = list(counts)
    if alpha.denominator == 1:
        return sum(c**alpha.numerator for c in counts)
    # Each term is rounded at the working precision; the guard digits absorb the accumulated error
    # of len(counts) roundings on terms no larger than the total.
    magnitude = len(str(max(counts, default=1))) * (alpha.numerator // alpha.denominator + 1)
    guard = magnitude + len(str(len(counts))) + 10
    with localcontext() as ctx:
        ctx.prec = precision + guard
        exponent = Decimal(alpha.numerator) / Decimal(alpha.denominator)
        total = sum((Decimal(c) ** exponent for c in counts), Decimal(0))
    integer_digits = max(total.adjusted() + 1, 1)
    return to_decimal(total, max(precision, integer_digits + 30))


def energy(A: RSet, spec: EnergySpec = EnergySpec()) -> int | Decimal:
    """The higher energy E_α(A) under the chosen operation; exact for integral α."""
    _check_energy_spec(spec)
    if not A:
        raise DomainError("the energy of the empty set is not defined")
    return power_sum(self_correlation(A, spec.operation).values(), Fraction(spec.alpha), spec.precision)


def additive_energy(A: RSet, alpha: Fraction | int = 2, precision: int = DEFAULT_PRECISION) -> int | Decimal:
    return energy(A, EnergySpec(Operation.Additive, Fraction(alpha), precision))


def multiplicative_energy(A: RSet, alpha: Fraction | int = 2, precision: int = DEFAULT_PRECISION) -> int | Decimal:
    return energy(A, EnergySpec(Operation.Multiplicative, Fraction(alpha), precision))


def fiber(A: RSet, s: Fraction, operation: Operation = Operation.Additive) -> RSet:
    """A_s = A ∩ (A - s) additively, A ∩ A s^{-1} multiplicatively."""
    if operation == Operation.Additive:
        return RSet(tuple(a for a in A if a + s in A))
    if s == 0:
        raise DomainError("the multiplicative fiber at 0 is not defined")
    return RSet(tuple(a for a in A if a * s in A))


def energy_fiber_oracle(
    A: RSet, k: int, operation: Operation = Operation.Additive, budget: int = DEFAULT_FIBER_ORACLE_BUDGET
) -> int:
    """E_k(A) through the fiber formula Σ_{s_1..s_{k-1}} |A_s|²; a testing oracle for |energy|."""
    if k < 2:
        raise DomainError(f"the fiber formula needs k ≥ 2, got {k}")
    if len(A) ** (2 * (k - 1)) > budget:
        raise ResourceError(f"fiber oracle for |A| = {len(A)}, k = {k} exceeds the budget of {budget}")
    if operation == Operation.Multiplicative and A.has_zero():
        raise DomainError(f"multiplicative fibers need 0 ∉ A, got {A}")
    # Only shifts with a nonempty fiber contribute, and those are exactly the support of A∘A.
    fibers = {s: fiber(A, s, operation).members for s in sorted(self_correlation(A, operation))}
    logger.debug("fiber oracle: %d shifts, k = %d, |A| = %d", len(fibers), k, len(A))
    total = 0

    def walk(current: FrozenSet[Fraction], depth: int) -> None:
        nonlocal total
        if depth == k - 1:
            total += len(current) ** 2
            return
        for members in fibers.values():
            meet = current & members
            if meet:
                walk(meet, depth + 1)

    walk(A.members, 0)
    return total


def cross_energy(A: RSet, B: RSet, operation: Operation = Operation.Additive) -> int:
    """E(A, B) = Σ_x (A∘A)(x)(B∘B)(x)."""
    if not A or not B:
        raise DomainError("cross energy needs nonempty sets")
    ra = self_correlation(A, operation)
    rb = self_correlation(B, operation)
    return sum(count * rb[x] for x, count in ra.items())


def triple_correlation(A: RSet, B: RSet, C: RSet, operation: Operation = Operation.Additive) -> int:
    """Σ_x (A∘A)(x)(B∘B)(x)(C∘C)(x)."""
    if not A or not B or not C:
        raise DomainError("triple correlation needs nonempty sets")
    ra = self_correlation(A, operation)
    rb = self_correlation(B, operation)
    rc = self_correlation(C, operation)
    return sum(count * rb[x] * rc[x] for x, count in ra.items())


def planar_setop(P: PlanarSet, Q: PlanarSet, kind: PlanarOpKind) -> PlanarSet:
    """The coordinatewise image {p∘q : p ∈ P, q ∈ Q}."""
    match kind:
        case PlanarOpKind.Sum:
            points = ((x1 + x2, y1 + y2) for (x1, y1) in P.points for (x2, y2) in Q.points)
        case PlanarOpKind.Difference:
            points = ((x1 - x2, y1 - y2) for (x1, y1) in P.points for (x2, y2) in Q.points)
        case PlanarOpKind.CoordinateProduct:
            points = ((x1 * x2, y1 * y2) for (x1, y1) in P.points for (x2, y2) in Q.points)
    return PlanarSet(frozenset(points))
