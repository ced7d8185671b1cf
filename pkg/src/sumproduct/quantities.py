"""
Derived functionals of finite sets and the exact structural statements about them:
the multiplicative doubling functional d(A) (as a witnessed upper bound), the magnification ratio R_B[A],
level sets of sumsets, chains over popular slopes and the fiber inclusions.

Every function returning a |CheckRecord| computes both sides of its statement exactly;
exact statements are decided here, measured ones only carry their ratio.
"""

import logging
from decimal import Decimal
from enum import StrEnum
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, NamedTuple

from sumproduct.config import DEFAULT_D_SUBSET_CAP, DEFAULT_MAGNIFICATION_CAP
from sumproduct.core import DEFAULT_PRECISION, DomainError, PlanarSet, ResourceError, RSet, to_decimal
from sumproduct.registry import CheckId, CheckRecord, exact_record, inputs_digest, measured_record
from sumproduct.setops import (
    Operation,
    Orientation,
    additive_energy,
    convolution,
    difference_set,
    fiber,
    multiplicative_energy,
    product_set,
    ratio_set,
    sumset,
)

logger = logging.getLogger(__name__)


class DoublingWitness(NamedTuple):
    # |AC|²/(|A||C|) for the best candidate C
    value: Fraction
    witness: RSet
    family_tag: str


class CandidateFamily(NamedTuple):
    """The sets C over which |AC|²/(|A||C|) is minimised."""

    include_self: bool = True
    include_inverse: bool = True
    # All multiplicative fibers A_q, q ∈ A:A.
    include_fibers: bool = True
    # All nonempty subsets of A with at most this many elements.
    subset_cap: int = DEFAULT_D_SUBSET_CAP

    def tag(self) -> str:
        parts = []
        if self.include_self:
            parts.append("self")
        if self.include_inverse:
            parts.append("inverse")
        if self.include_fibers:
            parts.append("fibers")
        if self.subset_cap > 0:
            parts.append(f"subsets<={self.subset_cap}")
        return "+".join(parts) if parts else "empty"

    # Whether the family of A^{-1} consists of the inverses of the family of A.
    def is_inversion_closed(self) -> bool:
        return self.include_self == self.include_inverse


def _candidates(A: RSet, family: CandidateFamily) -> List[RSet]:
    found: Dict[RSet, None] = {}
    if family.include_self:
        found[A] = None
    if family.include_inverse:
        found[A.inverse()] = None
    if family.include_fibers:
        for q in ratio_set(A, A):
            found[fiber(A, q, Operation.Multiplicative)] = None
    for size in range(1, min(family.subset_cap, len(A)) + 1):
        for subset in combinations(A.elements, size):
            found[RSet(subset)] = None
    return list(found)


def d_upper(A: RSet, family: CandidateFamily = CandidateFamily()) -> DoublingWitness:
    """The minimum of |AC|²/(|A||C|) over the candidate family: an upper bound for d(A).
    Ties are broken towards smaller, then lexicographically smaller, witnesses."""
    if not A:
        raise DomainError("d(A) needs a nonempty set")
    if A.has_zero():
        raise DomainError(f"d(A) needs 0 ∉ A, got {A}")
    candidates = _candidates(A, family)
    if not candidates:
        raise DomainError(f"the candidate family {family.tag()} is empty")
    best = None
    for C in candidates:
        value = Fraction(len(product_set(A, C)) ** 2, len(A) * len(C))
        key = (value, len(C), C.elements)
        if best is None or key < best[0]:
            best = (key, C)
    assert best is not None
    logger.debug("d_upper: %d candidates, best value %s", len(candidates), best[0][0])
    return DoublingWitness(best[0][0], best[1], family.tag())


class MagnificationResult(NamedTuple):
    ratio: Fraction
    # A nonempty subset X ⊆ A with |B∘X| = ratio·|X|
    minimizer: RSet
    enumerated_subsets: int


def magnification_ratio(
    A: RSet, B: RSet, operation: Operation = Operation.Additive, cap: int = DEFAULT_MAGNIFICATION_CAP
) -> MagnificationResult:
    """R_B[A] = min over nonempty Z ⊆ A of |B∘Z|/|Z|, by exhaustive enumeration.
    Among minimisers the smallest, then the lexicographically first, is returned."""
    if not A:
        raise DomainError("the magnification ratio needs a nonempty set A")
    if len(A) > cap:
        raise ResourceError(f"magnification ratio over |A| = {len(A)} exceeds the cap of {cap} elements")
    if operation == Operation.Additive:
        translates: List[FrozenSet[Fraction]] = [frozenset(b + a for b in B) for a in A]
    else:
        translates = [frozenset(b * a for b in B) for a in A]
    best_ratio = None
    best_subset: tuple = ()
    enumerated = 0
    for size in range(1, len(A) + 1):
        for indices in combinations(range(len(A)), size):
            enumerated += 1
            image: FrozenSet[Fraction] = frozenset().union(*(translates[i] for i in indices))
            ratio = Fraction(len(image), size)
            if best_ratio is None or ratio < best_ratio:
                best_ratio = ratio
                best_subset = indices
    assert best_ratio is not None
    minimizer = RSet(tuple(A.elements[i] for i in best_subset))
    return MagnificationResult(best_ratio, minimizer, enumerated)


def petridis_check(A: RSet, B: RSet, C: RSet, cap: int = DEFAULT_MAGNIFICATION_CAP) -> CheckRecord:
    """|B+C+X| ≤ R_B[A]·|C+X| for the minimiser X of |B+Z|/|Z| over Z ⊆ A."""
    result = magnification_ratio(A, B, Operation.Additive, cap)
    X = result.minimizer
    lhs = len(sumset(sumset(B, C), X))
    rhs = result.ratio * len(sumset(C, X))
    notes = {"R": str(result.ratio), "X": str(X), "enumerated_subsets": str(result.enumerated_subsets)}
    return exact_record(CheckId.PetridisMagnification, lhs, rhs, lhs <= rhs, inputs_digest(A, B, C), notes)


class TauRow(NamedTuple):
    tau: int
    # |{x ∈ A+B : (A*B)(x) ≥ τ}|
    size: int
    # size·τ³/|B|²
    ratio: Fraction


class SzTReport(NamedTuple):
    alpha: int
    tau_rows: List[TauRow]
    max_ratio: Decimal
    # |A|·d_upper(A), or None when d is undefined (0 ∈ A)
    c_theoretical: Decimal | None


def szt_level_sets(
    A: RSet,
    B: RSet,
    operation: Operation = Operation.Additive,
    family: CandidateFamily = CandidateFamily(),
    precision: int = DEFAULT_PRECISION,
) -> SzTReport:
    if not A or not B:
        raise DomainError("level sets need nonempty sets")
    counts = convolution(A, B, operation)
    rows = []
    for tau in range(1, max(counts.values()) + 1):
        size = sum(1 for count in counts.values() if count >= tau)
        rows.append(TauRow(tau, size, Fraction(size * tau**3, len(B) ** 2)))
    max_ratio = to_decimal(max(row.ratio for row in rows), precision)
    c_theoretical = None
    if not A.has_zero():
        c_theoretical = to_decimal(len(A) * d_upper(A, family).value, precision)
    return SzTReport(2, rows, max_ratio, c_theoretical)


class ChainMode(StrEnum):
    # Fibers combined by ratios with A: bounds |A:A + A| (resp. |A:A + A:A|).
    Ratio = "ratio"
    # Fibers combined by products with A: bounds |AA + A| (resp. |AA + AA|).
    Product = "product"


class SlopeFilter(NamedTuple):
    # Keep the slopes q with |A_q| ≥ threshold; None keeps every slope.
    threshold: Fraction | None = None


# The popular slopes: those whose fiber has at least |A|²/(2|A:A|) elements.
def popular_filter(A: RSet) -> SlopeFilter:
    return SlopeFilter(Fraction(len(A) ** 2, 2 * len(ratio_set(A, A))))


class ChainResult(NamedTuple):
    chain_sum: int
    target_sq: int
    record: CheckRecord


class _Slopes(NamedTuple):
    positive: RSet
    # The selected slopes in increasing order, each with its fiber.
    fibers: List[RSet]
    notes: Dict[str, str]


def _selected_slopes(A: RSet, slope_filter: SlopeFilter) -> _Slopes:
    if A.has_zero():
        raise DomainError(f"slope chains need 0 ∉ A, got {A}")
    positive = A.positive_part()
    notes: Dict[str, str] = {}
    if len(positive) != len(A):
        notes["transformation"] = f"restricted to the {len(positive)} positive element(s), dropped {len(A) - len(positive)}"
    if not positive:
        return _Slopes(positive, [], notes)
    fibers = []
    for q in ratio_set(positive, positive):
        F = fiber(positive, q, Operation.Multiplicative)
        if slope_filter.threshold is None or len(F) >= slope_filter.threshold:
            fibers.append(F)
    notes["slopes"] = str(len(fibers))
    if slope_filter.threshold is not None:
        notes["threshold"] = str(slope_filter.threshold)
    return _Slopes(positive, fibers, notes)


def _chain_record(check: CheckId, chain_sum: int, target: int, A: RSet, notes: Dict[str, str]) -> ChainResult:
    target_sq = target**2
    record = exact_record(check, chain_sum, target_sq, chain_sum <= target_sq, inputs_digest(A), notes)
    return ChainResult(chain_sum, target_sq, record)


def solymosi_chain(A: RSet, mode: ChainMode = ChainMode.Ratio, slope_filter: SlopeFilter = SlopeFilter()) -> ChainResult:
    """Σ_i |A_{q_i}|·|A_{q_{i+1}}:A| ≤ |A:A + A|² (ratio mode), Σ_i |A_{q_i}|·|A·A_{q_{i+1}}| ≤ |AA + A|² (product mode),
    over consecutive selected slopes q_1 < q_2 < ... of the positive part of A."""
    slopes = _selected_slopes(A, slope_filter)
    P = slopes.positive
    combine = ratio_set if mode == ChainMode.Ratio else product_set
    chain_sum = 0
    for F, G in zip(slopes.fibers, slopes.fibers[1:]):
        chain_sum += len(F) * len(combine(G, P))
    target = len(sumset(combine(P, P), P)) if P else 0
    check = CheckId.ChainRatioPlusSet if mode == ChainMode.Ratio else CheckId.ChainProductPlusSet
    return _chain_record(check, chain_sum, target, A, slopes.notes)


def solymosi_pair_chain(A: RSet, mode: ChainMode = ChainMode.Ratio, popularity: SlopeFilter = SlopeFilter()) -> ChainResult:
    """Σ_i |A_{q_i}:A|·|A_{q_{i+1}}:A| ≤ |A:A + A:A|² (ratio mode), Σ_i |A·A_{q_i}|·|A·A_{q_{i+1}}| ≤ |AA + AA|² (product mode)."""
    slopes = _selected_slopes(A, popularity)
    P = slopes.positive
    combine = ratio_set if mode == ChainMode.Ratio else product_set
    sizes = [len(combine(F, P)) for F in slopes.fibers]
    chain_sum = sum(x * y for x, y in zip(sizes, sizes[1:]))
    if P:
        D = combine(P, P)
        target = len(sumset(D, D))
    else:
        target = 0
    check = CheckId.ChainRatioPlusRatio if mode == ChainMode.Ratio else CheckId.ChainProductPlusProduct
    return _chain_record(check, chain_sum, target, A, slopes.notes)


class TauCount(NamedTuple):
    count: int
    rhs_core: Fraction
    record: CheckRecord


def tau_popularity_count(A: RSet, B: RSet, tau: int, precision: int = DEFAULT_PRECISION) -> TauCount:
    """The number of x with |A ∩ xB| ≥ τ, against |A+A||B+B|/τ²."""
    if tau < 1:
        raise DomainError(f"τ must be at least 1, got {tau}")
    if B.has_zero():
        raise DomainError(f"the popularity count needs 0 ∉ B, got {B}")
    correlation = convolution(A, B, Operation.Multiplicative, Orientation.Correlation)
    count = sum(1 for value in correlation.values() if value >= tau)
    rhs_core = Fraction(len(sumset(A, A)) * len(sumset(B, B)), tau**2)
    record = measured_record(CheckId.SolymosiTauCount, count, rhs_core, inputs_digest(A, B), {"tau": str(tau)}, precision)
    return TauCount(count, rhs_core, record)


def _inclusion_sizes(part: RSet, target: FrozenSet[Fraction]) -> tuple[int, int]:
    return len(part), sum(1 for x in part if x in target)


def katz_koester_check(A: RSet, s: Fraction) -> CheckRecord:
    """With A_s = {a ∈ A : as ∈ A}: A·A_s ⊆ AA ∩ s^{-1}AA and A:A_s ⊆ (A:A) ∩ s(A:A).
    The record compares the sizes of the left-hand sets with the sizes of their parts inside the targets;
    the dilates swapped (sAA and s^{-1}(A:A)) are evaluated too and reported in the notes."""
    if s == 0:
        raise DomainError("the fiber at 0 is not defined")
    if A.has_zero():
        raise DomainError(f"the fiber inclusion needs 0 ∉ A, got {A}")
    Fs = fiber(A, s, Operation.Multiplicative)
    AA = product_set(A, A).members
    QQ = ratio_set(A, A).members
    products = product_set(A, Fs)
    ratios = ratio_set(A, Fs)
    verified = (AA & {x / s for x in AA}, QQ & {x * s for x in QQ})
    printed = (AA & {x * s for x in AA}, QQ & {x / s for x in QQ})
    p_size, p_inside = _inclusion_sizes(products, verified[0])
    r_size, r_inside = _inclusion_sizes(ratios, verified[1])
    printed_holds = products.members <= printed[0] and ratios.members <= printed[1]
    lhs, rhs = p_size + r_size, p_inside + r_inside
    notes = {"s": str(s), "fiber_size": str(len(Fs)), "swapped_dilates_hold": str(printed_holds).lower()}
    return exact_record(CheckId.KatzKoesterMultiplicative, lhs, rhs, lhs <= rhs, inputs_digest(A), notes)


def katz_koester_additive_check(A: RSet, s: Fraction) -> CheckRecord:
    """With A_s = {a ∈ A : a + s ∈ A}: A + A_s ⊆ (A+A) ∩ (A+A-s)."""
    Fs = fiber(A, s, Operation.Additive)
    AA = sumset(A, A).members
    target = AA & {x - s for x in AA}
    sums = sumset(A, Fs)
    lhs, rhs = _inclusion_sizes(sums, target)
    notes = {"s": str(s), "fiber_size": str(len(Fs))}
    return exact_record(CheckId.KatzKoesterAdditive, lhs, rhs, lhs <= rhs, inputs_digest(A), notes)


def ruzsa_triangle_check(A: RSet, B: RSet, C: RSet) -> CheckRecord:
    """|C||A-B| ≤ |A×B - Δ(C)| ≤ |A-C||B-C|; the record carries the middle term against the right-hand side."""
    if not A or not B or not C:
        raise DomainError("the triangle inequality needs nonempty sets")
    lower = len(C) * len(difference_set(A, B))
    middle = len(PlanarSet(frozenset((a - c, b - c) for a in A for b in B for c in C)))
    upper = len(difference_set(A, C)) * len(difference_set(B, C))
    holds = lower <= middle <= upper
    return exact_record(
        CheckId.RuzsaTriangle, middle, upper, holds, inputs_digest(A, B, C), {"lower": str(lower), "middle": str(middle)}
    )


def d_product_bound_check(
    A: RSet,
    C: RSet,
    mode: ChainMode = ChainMode.Product,
    cap: int = DEFAULT_MAGNIFICATION_CAP,
    precision: int = DEFAULT_PRECISION,
) -> CheckRecord:
    """The witness for d(AA) (product mode) or d(A:A) (ratio mode) built from C:
    X ⊆ C minimising |AZ|/|Z|, then |DX|²/(|D||X|) against |AC|⁴/(|D||C|³) for D = AA resp. A:A.
    Product mode is exact, ratio mode is measured."""
    if A.has_zero() or C.has_zero():
        raise DomainError(f"the doubling bound needs 0 ∉ A and 0 ∉ C, got {A} and {C}")
    if not A or not C:
        raise DomainError("the doubling bound needs nonempty sets")
    result = magnification_ratio(C, A, Operation.Multiplicative, cap)
    X = result.minimizer
    D = product_set(A, A) if mode == ChainMode.Product else ratio_set(A, A)
    lhs = Fraction(len(product_set(D, X)) ** 2, len(D) * len(X))
    rhs = Fraction(len(product_set(A, C)) ** 4, len(D) * len(C) ** 3)
    notes = {"R": str(result.ratio), "X": str(X)}
    digest = inputs_digest(A, C)
    if mode == ChainMode.Product:
        return exact_record(CheckId.DoublingProductBound, lhs, rhs, lhs <= rhs, digest, notes, precision)
    # The exact step |A·A^{-1}·X| ≤ R·|A^{-1}X| holds even though the final comparison is not exact.
    Ainv_X = product_set(A.inverse(), X)
    step_lhs = len(product_set(A, Ainv_X))
    step_rhs = result.ratio * len(Ainv_X)
    notes["magnification_step"] = f"{step_lhs} <= {step_rhs}"
    notes["magnification_step_holds"] = str(step_lhs <= step_rhs).lower()
    return measured_record(CheckId.DoublingRatioBound, lhs, rhs, digest, notes, precision)


def d_inversion_check(A: RSet, family: CandidateFamily = CandidateFamily()) -> CheckRecord:
    """d_upper(A) = d_upper(A^{-1}) over an inversion-closed candidate family."""
    if not family.is_inversion_closed():
        raise DomainError(f"the candidate family {family.tag()} is not closed under inversion")
    left = d_upper(A, family)
    right = d_upper(A.inverse(), family)
    notes = {"witness": str(left.witness), "inverse_witness": str(right.witness), "family": family.tag()}
    return exact_record(CheckId.DoublingInversion, left.value, right.value, left.value == right.value, inputs_digest(A), notes)


def headline_statistics(A: RSet, family: CandidateFamily = CandidateFamily(), precision: int = DEFAULT_PRECISION) -> Dict[str, object]:
    """Every sumset size, energy and the d(A) witness of one set; quantities dividing by 0 ∈ A are None."""
    if not A:
        raise DomainError("statistics need a nonempty set")
    nonzero = not A.has_zero()
    AA = product_set(A, A)
    QQ = ratio_set(A, A) if nonzero else None
    return {
        "|A|": len(A),
        "|A+A|": len(sumset(A, A)),
        "|A-A|": len(difference_set(A, A)),
        "|AA|": len(AA),
        "|A:A|": len(QQ) if QQ is not None else None,
        "|AA+A|": len(sumset(AA, A)),
        "|A:A+A|": len(sumset(QQ, A)) if QQ is not None else None,
        "|AA+AA|": len(sumset(AA, AA)),
        "|A:A+A:A|": len(sumset(QQ, QQ)) if QQ is not None else None,
        "E+_2": additive_energy(A),
        "E+_3": additive_energy(A, 3),
        "Ex_2": multiplicative_energy(A) if nonzero else None,
        "Ex_3/2": multiplicative_energy(A, Fraction(3, 2), precision) if nonzero else None,
        "d_upper": d_upper(A, family) if nonzero else None,
    }
