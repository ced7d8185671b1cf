#!/usr/bin/env python3

"""
The ledger runs the registered checks over a corpus of sets.

Each public |check_*| function evaluates one group of statements on concrete sets and returns its records.
|run_suite| applies every selected check to every corpus member: a check needing several sets
takes the following corpus members cyclically (B is the next member, C the one after that, ...).
Checks whose preconditions fail or whose computation would exceed a budget are recorded as skipped,
with the reason. A failing exact check aborts the suite with an |ExactCheckFailure|.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, NamedTuple, Tuple

import numpy as np

from sumproduct.config import LabConfig
from sumproduct.core import (
    DomainError,
    PlanarSet,
    ResourceError,
    RSet,
    SumProductError,
    cartesian,
    decimal_power,
    diagonal,
    log2,
    to_decimal,
)
from sumproduct.generators import generate, parse_family_spec
from sumproduct.quantities import (
    CandidateFamily,
    ChainMode,
    SlopeFilter,
    d_inversion_check,
    d_product_bound_check,
    d_upper,
    katz_koester_additive_check,
    katz_koester_check,
    petridis_check,
    popular_filter,
    ruzsa_triangle_check,
    solymosi_chain,
    solymosi_pair_chain,
    szt_level_sets,
    tau_popularity_count,
)
from sumproduct.registry import (
    CheckId,
    CheckRecord,
    all_checks,
    exact_record,
    inputs_digest,
    measured_record,
    skipped_record,
)
from sumproduct.setops import (
    Operation,
    PlanarOpKind,
    additive_energy,
    cross_energy,
    difference_set,
    fiber,
    guard_pairs,
    multiplicative_energy,
    planar_setop,
    product_set,
    ratio_set,
    sumset,
    triple_correlation,
)
from sumproduct.verdict import CheckKind, Verdict

logger = logging.getLogger(__name__)


class CheckSummary(NamedTuple):
    # Number of records with a ratio, and number of skipped records.
    count: int
    skipped: int
    min_ratio: Decimal | None
    max_ratio: Decimal | None
    median_ratio: Decimal | None


class SuiteResult(NamedTuple):
    records: List[CheckRecord]
    corpus_tag: str
    # Indexed by check identifier.
    summary: Dict[str, CheckSummary]


class ExactCheckFailure(SumProductError):
    """An exact statement failed: the failing record, the input sets (in set file format) and everything computed so far."""

    def __init__(self, record: CheckRecord, reproducer: Dict[str, str], partial: SuiteResult) -> None:
        super().__init__(f"exact check {record.check_id} failed on inputs {record.inputs_digest}: {record.lhs} vs {record.rhs_core}")
        self.record = record
        self.reproducer = reproducer
        self.partial = partial


### Helpers for the measured statements ###


def _need_size(A: RSet, n: int, what: str) -> None:
    if len(A) < n:
        raise DomainError(f"{what} needs |A| ≥ {n}, got |A| = {len(A)}")


def _need_nonzero(what: str, *sets: RSet) -> None:
    for X in sets:
        if X.has_zero():
            raise DomainError(f"{what} needs sets without 0, got {X}")


def _plus(config: LabConfig, X: RSet, Y: RSet, what: str) -> RSet:
    guard_pairs(config.pair_budget, X, Y, what)
    return sumset(X, Y)


# The product of base_i^exponent_i, as a Decimal with guard digits.
def _monomial(precision: int, *factors: Tuple[Fraction | int | Decimal, Fraction | int]) -> Decimal:
    result = Decimal(1)
    for base, exponent in factors:
        result *= decimal_power(base, Fraction(exponent), precision + 10)
    return to_decimal(result, precision + 10)


@lru_cache(maxsize=256)
def _d(A: RSet, subset_cap: int) -> Fraction:
    return d_upper(A, CandidateFamily(subset_cap=subset_cap)).value


# The SzT constant c(A) = |A|·d(A), with d replaced by its witnessed upper bound.
def _c(A: RSet, config: LabConfig) -> Fraction:
    return len(A) * _d(A, config.d_subset_cap)


### Exact checks ###


def check_ruzsa(A: RSet, B: RSet, C: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    return [ruzsa_triangle_check(A, B, C)]


def check_petridis(A: RSet, B: RSet, C: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    return [petridis_check(A, B, C, config.magnification_cap)]


def check_chains(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    _need_nonzero("the slope chains", A)
    positive = A.positive_part()
    popular = popular_filter(positive) if positive else SlopeFilter()
    return [
        solymosi_chain(A, ChainMode.Ratio).record,
        solymosi_chain(A, ChainMode.Product).record,
        solymosi_pair_chain(A, ChainMode.Ratio, popular).record,
        solymosi_pair_chain(A, ChainMode.Product, popular).record,
    ]


def _aggregate(check: CheckId, records: List[CheckRecord], A: RSet, notes: Dict[str, str]) -> CheckRecord:
    lhs = sum((r.lhs_exact for r in records if r.lhs_exact is not None), Fraction(0))
    rhs = sum((r.rhs_exact for r in records if r.rhs_exact is not None), Fraction(0))
    holds = all(r.verdict == Verdict.Pass for r in records)
    failing = [r.notes["s"] for r in records if r.verdict != Verdict.Pass]
    if failing:
        notes["failing_s"] = ", ".join(failing)
    return exact_record(check, lhs, rhs, holds, inputs_digest(A), notes)


def check_katz_koester(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """Both fiber inclusions for every admissible s, aggregated into one record per set:
    the summed sizes of the included sets against the summed sizes of their parts inside the targets.
    The multiplicative record also states, for this set, the s at which the swapped dilates fail."""
    _need_nonzero("the multiplicative fiber inclusion", A)
    slopes = ratio_set(A, A)
    multiplicative = [katz_koester_check(A, s) for s in slopes]
    failing = [r.notes["s"] for r in multiplicative if r.notes["swapped_dilates_hold"] != "true"]
    differences = difference_set(A, A)
    additive = [katz_koester_additive_check(A, s) for s in differences]
    notes = {
        "slopes": str(len(slopes)),
        "swapped_dilates_hold": str(not failing).lower(),
        "swapped_dilates_hold_for": str(len(slopes) - len(failing)),
        "swapped_dilates_fail_at": " ".join(failing),
    }
    return [
        _aggregate(CheckId.KatzKoesterMultiplicative, multiplicative, A, notes),
        _aggregate(CheckId.KatzKoesterAdditive, additive, A, {"shifts": str(len(differences))}),
    ]


def check_doubling(A: RSet, C: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    _need_nonzero("the doubling functional", A, C)
    return [
        d_product_bound_check(A, C, ChainMode.Product, config.magnification_cap, config.energy_precision),
        d_product_bound_check(A, C, ChainMode.Ratio, config.magnification_cap, config.energy_precision),
    ]


def check_inversion(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    _need_nonzero("the doubling functional", A)
    return [d_inversion_check(A, CandidateFamily(subset_cap=config.d_subset_cap))]


def check_cauchy_schwarz(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|A|⁴ ≤ E^+(A)·|A+A|."""
    lhs = len(A) ** 4
    energy = additive_energy(A)
    rhs = energy * len(sumset(A, A))
    return [exact_record(CheckId.EnergyCauchySchwarz, lhs, rhs, lhs <= rhs, inputs_digest(A), {"energy": str(energy)})]


def check_third_energy(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|A|³|A-A| ≤ E^+_3(A+A) and ≤ E^+_3(A-A): every s ∈ A-A is represented at least |A| times in both."""
    lhs = len(A) ** 3 * len(difference_set(A, A))
    records = []
    for check, D in (
        (CheckId.ThirdEnergySum, _plus(config, A, A, "|A+A|")),
        (CheckId.ThirdEnergyDifference, difference_set(A, A)),
    ):
        guard_pairs(config.pair_budget, D, D, "E_3 of a sumset")
        rhs = additive_energy(D, 3)
        records.append(exact_record(check, lhs, rhs, lhs <= rhs, inputs_digest(A), {"size": str(len(D))}))
    return records


### Measured checks ###


def check_balog_scalar(A: RSet, B: RSet, C: RSet, D: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|AC+A||BC+B| against |A||B||C|, and |AC+AD||BC+BD| against |B/A||C||D|."""
    p = config.energy_precision
    lhs1 = len(_plus(config, product_set(A, C), A, "|AC+A|")) * len(_plus(config, product_set(B, C), B, "|BC+B|"))
    records = [measured_record(CheckId.BalogScalar, lhs1, len(A) * len(B) * len(C), inputs_digest(A, B, C), precision=p)]
    _need_nonzero("|B/A|", A)
    lhs2 = len(_plus(config, product_set(A, C), product_set(A, D), "|AC+AD|")) * len(
        _plus(config, product_set(B, C), product_set(B, D), "|BC+BD|")
    )
    rhs2 = len(ratio_set(B, A)) * len(C) * len(D)
    records.append(measured_record(CheckId.BalogScalarPair, lhs2, rhs2, inputs_digest(A, B, C, D), precision=p))
    return records


def _planar_guard(config: LabConfig, P: PlanarSet, Q: PlanarSet, what: str) -> None:
    if len(P) * len(Q) > config.pair_budget:
        raise ResourceError(f"{what} needs {len(P)}·{len(Q)} pairs, over the budget of {config.pair_budget}")


def check_balog_planar(A: RSet, B: RSet, C: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|(A×B)·Δ(C) + A×B| against |A||B||C|."""
    _need_nonzero("the planar dilation", C)
    grid = cartesian(A, B)
    dilated = planar_setop(grid, diagonal(C), PlanarOpKind.CoordinateProduct)
    _planar_guard(config, dilated, grid, "the planar sumset")
    lhs = len(planar_setop(dilated, grid, PlanarOpKind.Sum))
    return [measured_record(CheckId.BalogPlanar, lhs, len(A) * len(B) * len(C), inputs_digest(A, B, C), precision=config.energy_precision)]


def check_balog_planar_pair(A: RSet, B: RSet, C: RSet, D: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|(A×B)·Δ(C) + (A×B)·Δ(D)| against |B/A||C||D|."""
    _need_nonzero("the planar dilation", A, C, D)
    grid = cartesian(A, B)
    left = planar_setop(grid, diagonal(C), PlanarOpKind.CoordinateProduct)
    right = planar_setop(grid, diagonal(D), PlanarOpKind.CoordinateProduct)
    _planar_guard(config, left, right, "the planar sumset")
    lhs = len(planar_setop(left, right, PlanarOpKind.Sum))
    rhs = len(ratio_set(B, A)) * len(C) * len(D)
    return [measured_record(CheckId.BalogPlanarPair, lhs, rhs, inputs_digest(A, B, C, D), precision=config.energy_precision)]


def check_balog_consequences(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|AA+A| against |A|^{3/2}, |AA+AA| against |A||A/A|^{1/2}."""
    _need_nonzero("|A/A|", A)
    p = config.energy_precision
    AA = product_set(A, A)
    digest = inputs_digest(A)
    return [
        measured_record(CheckId.BalogProductPlusSet, len(_plus(config, AA, A, "|AA+A|")), _monomial(p, (len(A), Fraction(3, 2))), digest, precision=p),
        measured_record(
            CheckId.BalogProductPlusProduct,
            len(_plus(config, AA, AA, "|AA+AA|")),
            _monomial(p, (len(A), 1), (len(ratio_set(A, A)), Fraction(1, 2))),
            digest,
            precision=p,
        ),
    ]


def check_solymosi_sum_product(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """max(|A+A|, |AA|) against |A|^{4/3}·log^{-1/3}|A|."""
    _need_size(A, 2, "the logarithmic factor")
    p = config.energy_precision
    sums, products = len(sumset(A, A)), len(product_set(A, A))
    rhs = _monomial(p, (len(A), Fraction(4, 3)), (log2(len(A), p + 10), Fraction(-1, 3)))
    notes = {"sumset": str(sums), "product_set": str(products)}
    return [measured_record(CheckId.SolymosiMaxSumProduct, max(sums, products), rhs, inputs_digest(A), notes, p)]


def check_tau_popularity(A: RSet, B: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """The popularity count at every τ; the record is the τ with the largest count·τ²/(|A+A||B+B|)."""
    _need_nonzero("the popularity count", B)
    rows = [tau_popularity_count(A, B, tau, config.energy_precision) for tau in range(1, min(len(A), len(B)) + 1)]
    best = max(rows, key=lambda row: (row.record.ratio or Decimal(0), -int(row.record.notes["tau"])))
    notes = dict(best.record.notes)
    notes["counts"] = " ".join(str(row.count) for row in rows)
    notes["calibration"] = str(config.tau_calibration)
    notes["within_calibration"] = str(best.record.ratio is not None and best.record.ratio <= config.tau_calibration).lower()
    return [best.record._replace(notes=notes)]


def check_solymosi_energy(A: RSet, B: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """E^×(A, B) against |A+A||B+B|·log min(|A|, |B|)."""
    _need_nonzero("the multiplicative energy", A, B)
    _need_size(A, 2, "the logarithmic factor")
    _need_size(B, 2, "the logarithmic factor")
    p = config.energy_precision
    lhs = cross_energy(A, B, Operation.Multiplicative)
    rhs = to_decimal(len(sumset(A, A)) * len(sumset(B, B)) * log2(min(len(A), len(B)), p + 10), p)
    return [measured_record(CheckId.SolymosiEnergy, lhs, rhs, inputs_digest(A, B), precision=p)]


# |X+Y|, or the reason it was not formed.
def _plus_size(config: LabConfig, X: RSet, Y: RSet, what: str) -> int | str:
    try:
        return len(_plus(config, X, Y, what))
    except ResourceError as err:
        return str(err)


def check_main_theorems(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """The lower bounds for |A:A+A|, |AA+A| (two forms), |A:A+A:A| and |AA+AA|, log factors included.
    A sumset over the pair budget skips only the records it feeds."""
    _need_nonzero("the ratio set", A)
    _need_size(A, 2, "the logarithmic factor")
    p = config.energy_precision
    n = len(A)
    log = log2(n, p + 10)
    AA, QQ = product_set(A, A), ratio_set(A, A)
    digest = inputs_digest(A)
    energy = multiplicative_energy(A, Fraction(3, 2), p)
    # The unconditional form has |A:A| in its exponents; the form with |A:A| ≪ |AA| as a hypothesis drops it.
    condition = {"ratio_set": str(len(QQ)), "product_set": str(len(AA)), "ratio_set_at_most_product_set": str(len(QQ) <= len(AA)).lower()}
    product_plus_set = _plus_size(config, AA, A, "|AA+A|")
    bounds = [
        (
            CheckId.GrowthRatioPlusSet,
            _plus_size(config, QQ, A, "|A:A+A|"),
            _monomial(p, (n, Fraction(3, 2) + Fraction(1, 82)), (log, Fraction(-2, 41))),
            None,
        ),
        (
            CheckId.GrowthProductPlusSet,
            product_plus_set,
            _monomial(p, (len(AA), Fraction(11, 41)), (len(QQ), Fraction(-11, 41)), (n, Fraction(62, 41)), (log, Fraction(-2, 41))),
            condition,
        ),
        (
            CheckId.GrowthProductPlusSetEnergy,
            product_plus_set,
            _monomial(p, (len(AA), Fraction(11, 41)), (n, Fraction(-4, 41)), (energy, Fraction(22, 41)), (log, Fraction(-2, 41))),
            {"multiplicative_energy_3/2": str(energy)},
        ),
        (
            CheckId.GrowthRatioPlusRatio,
            _plus_size(config, QQ, QQ, "|A:A+A:A|"),
            _monomial(p, (len(QQ), Fraction(14, 29)), (n, Fraction(30, 29)), (log, Fraction(-2, 29))),
            None,
        ),
        (
            CheckId.GrowthProductPlusProduct,
            _plus_size(config, AA, AA, "|AA+AA|"),
            _monomial(p, (len(AA), Fraction(19, 29)), (len(QQ), Fraction(-5, 29)), (n, Fraction(30, 29)), (log, Fraction(-2, 29))),
            None,
        ),
    ]
    records = []
    for check, size, rhs, notes in bounds:
        match size:
            case str(reason):
                logger.info("skipping %s on %s: %s", check, digest, reason)
                records.append(skipped_record(check, digest, reason))
            case _:
                records.append(measured_record(check, size, rhs, digest, notes, p))
    return records


def check_szt_level_sets(A: RSet, B: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """max over τ of |{x : (A*B)(x) ≥ τ}|·τ³/|B|² against c(A) = |A|·d(A)."""
    _need_nonzero("the doubling functional", A)
    report = szt_level_sets(A, B, Operation.Additive, CandidateFamily(subset_cap=config.d_subset_cap), config.energy_precision)
    best = max(report.tau_rows, key=lambda row: (row.ratio, -row.tau))
    notes = {"tau": str(best.tau), "level_set": str(best.size), "levels": str(len(report.tau_rows))}
    assert report.c_theoretical is not None
    return [measured_record(CheckId.SztLevelSets, best.ratio, _c(A, config), inputs_digest(A, B), notes, config.energy_precision)]


def check_szt_energies(A: RSet, B: RSet, C: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """The three energy bounds for sets of SzT-type with α = 2 and c(X) = |X|·d(X)."""
    _need_nonzero("the doubling functional", A, B, C)
    p = config.energy_precision
    n = len(A)
    energy = additive_energy(A)
    energy_32 = additive_energy(A, Fraction(3, 2), p)
    cA = _c(A, config)
    records = [
        measured_record(CheckId.SztEnergyCubed, energy**3, _monomial(p, (energy_32, 2), (cA, 1), (n, 2)), inputs_digest(A), precision=p),
        measured_record(CheckId.SztEnergy, energy, _monomial(p, (cA, Fraction(1, 2)), (n, 2)), inputs_digest(A), precision=p),
    ]
    smallest = min(len(A), len(B), len(C))
    if smallest < 2:
        records.append(skipped_record(CheckId.SztTripleCorrelation, inputs_digest(A, B, C), "the logarithmic factor needs all sets of size ≥ 2"))
        return records
    rhs = _monomial(
        p,
        (_c(A, config) * _c(B, config) * _c(C, config), Fraction(1, 3)),
        (len(A) * len(B) * len(C), Fraction(2, 3)),
        (log2(smallest, p + 10), 1),
    )
    records.append(measured_record(CheckId.SztTripleCorrelation, triple_correlation(A, B, C), rhs, inputs_digest(A, B, C), precision=p))
    return records


def check_szt_sumset(A: RSet, A_star: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """|A ± A_*| against max{T1, T2, min{T3, T4}}·(log(|A||A_*|))^{-2/9}, d replaced by its witnessed upper bound."""
    _need_nonzero("the doubling functional", A, A_star)
    if len(A) * len(A_star) < 2:
        raise DomainError("the logarithmic factor needs |A||A_*| ≥ 2")
    p = config.energy_precision
    n, m = len(A), len(A_star)
    d, d_star = _d(A, config.d_subset_cap), _d(A_star, config.d_subset_cap)
    t1 = _monomial(p, (d_star, Fraction(-1, 3)), (d, Fraction(-2, 9)), (m, Fraction(8, 9)), (n, Fraction(2, 3)))
    t2 = _monomial(p, (d, Fraction(-1, 3)), (d_star, Fraction(-2, 9)), (n, Fraction(8, 9)), (m, Fraction(2, 3)))
    t3 = _monomial(p, (d_star, Fraction(-2, 27)), (d, Fraction(-13, 27)), (m, Fraction(14, 9)))
    t4 = _monomial(p, (d, Fraction(-2, 27)), (d_star, Fraction(-13, 27)), (n, Fraction(14, 9)))
    rhs = to_decimal(max(t1, t2, min(t3, t4)) * decimal_power(log2(n * m, p + 10), Fraction(-2, 9), p + 10), p)
    notes = {"d": str(d), "d_star": str(d_star)}
    digest = inputs_digest(A, A_star)
    return [
        measured_record(CheckId.SztSumLowerBound, len(sumset(A, A_star)), rhs, digest, dict(notes, sign="plus"), p),
        measured_record(CheckId.SztSumLowerBound, len(difference_set(A, A_star)), rhs, digest, dict(notes, sign="minus"), p),
    ]


def check_energy_growth(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """Four lower bounds, each for the product and the ratio variant of the left-hand side,
    plus the fiber bound at the most popular slope s ≠ 1."""
    _need_nonzero("the ratio set", A)
    _need_size(A, 2, "the logarithmic factor")
    p = config.energy_precision
    n = len(A)
    log = log2(n, p + 10)
    AA, QQ = product_set(A, A), ratio_set(A, A)
    sizes = {
        ChainMode.Product: (len(_plus(config, AA, A, "|AA+A|")), len(_plus(config, AA, AA, "|AA+AA|"))),
        ChainMode.Ratio: (len(_plus(config, QQ, A, "|A:A+A|")), len(_plus(config, QQ, QQ, "|A:A+A:A|"))),
    }
    energy_3 = additive_energy(A, 3)
    energy_32 = multiplicative_energy(A, Fraction(3, 2), p)
    differences = len(difference_set(A, A))
    fourth_energy = _monomial(p, (n, -2), (energy_32, 2), (energy_3, 1), (log, -1))
    square_energy = _monomial(p, (energy_3, 1), (log, -1))
    fourth_difference = Fraction(n**10, len(QQ) * differences**2)
    square_difference = Fraction(n**6, differences**2)
    ids = {
        ChainMode.Product: (
            CheckId.FourthPowerEnergyProduct,
            CheckId.SquareEnergyProduct,
            CheckId.FourthPowerDifferenceProduct,
            CheckId.SquareDifferenceProduct,
        ),
        ChainMode.Ratio: (
            CheckId.FourthPowerEnergyRatio,
            CheckId.SquareEnergyRatio,
            CheckId.FourthPowerDifferenceRatio,
            CheckId.SquareDifferenceRatio,
        ),
    }
    digest = inputs_digest(A)
    records = []
    for mode in (ChainMode.Product, ChainMode.Ratio):
        plus_set, plus_self = sizes[mode]
        fourth_energy_id, square_energy_id, fourth_difference_id, square_difference_id = ids[mode]
        records += [
            measured_record(fourth_energy_id, plus_set**4, fourth_energy, digest, precision=p),
            measured_record(square_energy_id, plus_self**2, square_energy, digest, precision=p),
            measured_record(fourth_difference_id, plus_set**4, fourth_difference, digest, precision=p),
            measured_record(square_difference_id, plus_self**2, square_difference, digest, precision=p),
        ]
    # The most popular slope other than 1 (A_1 = A); ties go to the smaller slope.
    slopes = [q for q in QQ if q != 1]
    s = max(slopes, key=lambda q: (len(fiber(A, q, Operation.Multiplicative)), -q))
    Fs = fiber(A, s, Operation.Multiplicative)
    rhs = _monomial(p, (n, -2), (len(Fs), 1), (energy_3, 1), (log, -1))
    notes = {"s": str(s), "fiber_size": str(len(Fs)), "ratio_variant": str(len(ratio_set(A, Fs)) ** 2)}
    records.append(measured_record(CheckId.FiberEnergy, len(product_set(A, Fs)) ** 2, rhs, digest, notes, p))
    return records


def check_energy_comparisons(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """E^+(A) against |A||AA+AA|, and E^+(A)^{3/2}·E^×_{3/2}(A) against E^+_{3/2}(A)·|A|·|AA+A|²."""
    _need_nonzero("the multiplicative energy", A)
    p = config.energy_precision
    AA = product_set(A, A)
    energy = additive_energy(A)
    digest = inputs_digest(A)
    lhs2 = _monomial(p, (energy, Fraction(3, 2)), (multiplicative_energy(A, Fraction(3, 2), p), 1))
    rhs2 = _monomial(p, (additive_energy(A, Fraction(3, 2), p), 1), (len(A), 1), (len(_plus(config, AA, A, "|AA+A|")), 2))
    return [
        measured_record(CheckId.AdditiveEnergyVsProducts, energy, len(A) * len(_plus(config, AA, AA, "|AA+AA|")), digest, precision=p),
        measured_record(CheckId.MixedThreeHalvesEnergy, lhs2, rhs2, digest, precision=p),
    ]


def check_sum_difference_growth(A: RSet, config: LabConfig = LabConfig()) -> List[CheckRecord]:
    """Both hypotheses (in all four sum/difference, product/division variants) and the three conclusions.
    Every record carries all hypothesis ratios, which is the instance of the implication."""
    _need_size(A, 2, "the logarithmic factor")
    p = config.energy_precision
    n = len(A)
    log = log2(n, p + 10)
    S, D = _plus(config, A, A, "|A+A|"), difference_set(A, A)
    conditions: Dict[str, str] = {}
    first_plus = None
    for name, E in (("sum", S), ("difference", D)):
        for op_name, combine in (("product", product_set), ("division", ratio_set)):
            # Division by the nonzero part only.
            denominator = E.without_zero() if op_name == "division" else E
            guard_pairs(config.pair_budget, E, denominator, f"({name} set){op_name}")
            P = combine(E, denominator)
            size = len(_plus(config, P, P, f"the {op_name} set of the {name} set, added to itself"))
            ratio = to_decimal(Fraction(size, n**2), p)
            conditions[f"{name}_{op_name}_condition"] = str(ratio)
            if name == "sum" and op_name == "product":
                first_plus = size
    energy_condition = to_decimal(Fraction(additive_energy(A) * len(D), n**4), p)
    conditions["energy_condition"] = str(energy_condition)
    assert first_plus is not None
    digest = inputs_digest(A)
    notes = dict(conditions, sumset=str(len(S)))
    return [
        measured_record(CheckId.SumDifferenceConditions, first_plus, n**2, digest, dict(conditions), p),
        measured_record(CheckId.SumDifferenceDifferenceLogFourSevenths, len(D), _monomial(p, (n, 1), (log, Fraction(4, 7))), digest, dict(notes), p),
        measured_record(CheckId.SumDifferenceSumLog, max(len(S), len(D)), to_decimal(n * log, p), digest, dict(notes), p),
        measured_record(CheckId.SumDifferenceDifferenceLog, len(D), to_decimal(n * log, p), digest, dict(notes), p),
    ]


### The suite ###


class Runner(NamedTuple):
    run: Callable[..., List[CheckRecord]]
    # Number of corpus sets passed to |run|.
    arity: int
    checks: Tuple[CheckId, ...]


RUNNERS: List[Runner] = [
    Runner(check_ruzsa, 3, (CheckId.RuzsaTriangle,)),
    Runner(check_petridis, 3, (CheckId.PetridisMagnification,)),
    Runner(
        check_chains,
        1,
        (CheckId.ChainRatioPlusSet, CheckId.ChainProductPlusSet, CheckId.ChainRatioPlusRatio, CheckId.ChainProductPlusProduct),
    ),
    Runner(check_katz_koester, 1, (CheckId.KatzKoesterMultiplicative, CheckId.KatzKoesterAdditive)),
    Runner(check_doubling, 2, (CheckId.DoublingProductBound, CheckId.DoublingRatioBound)),
    Runner(check_inversion, 1, (CheckId.DoublingInversion,)),
    Runner(check_cauchy_schwarz, 1, (CheckId.EnergyCauchySchwarz,)),
    Runner(check_third_energy, 1, (CheckId.ThirdEnergySum, CheckId.ThirdEnergyDifference)),
    Runner(check_balog_scalar, 4, (CheckId.BalogScalar, CheckId.BalogScalarPair)),
    Runner(check_balog_planar, 3, (CheckId.BalogPlanar,)),
    Runner(check_balog_planar_pair, 4, (CheckId.BalogPlanarPair,)),
    Runner(check_balog_consequences, 1, (CheckId.BalogProductPlusSet, CheckId.BalogProductPlusProduct)),
    Runner(check_solymosi_sum_product, 1, (CheckId.SolymosiMaxSumProduct,)),
    Runner(check_tau_popularity, 2, (CheckId.SolymosiTauCount,)),
    Runner(check_solymosi_energy, 2, (CheckId.SolymosiEnergy,)),
    Runner(
        check_main_theorems,
        1,
        (
            CheckId.GrowthRatioPlusSet,
            CheckId.GrowthProductPlusSet,
            CheckId.GrowthProductPlusSetEnergy,
            CheckId.GrowthRatioPlusRatio,
            CheckId.GrowthProductPlusProduct,
        ),
    ),
    Runner(check_szt_level_sets, 2, (CheckId.SztLevelSets,)),
    Runner(check_szt_energies, 3, (CheckId.SztEnergyCubed, CheckId.SztEnergy, CheckId.SztTripleCorrelation)),
    Runner(check_szt_sumset, 2, (CheckId.SztSumLowerBound,)),
    Runner(
        check_energy_growth,
        1,
        (
            CheckId.FourthPowerEnergyProduct,
            CheckId.SquareEnergyProduct,
            CheckId.FourthPowerDifferenceProduct,
            CheckId.SquareDifferenceProduct,
            CheckId.FourthPowerEnergyRatio,
            CheckId.SquareEnergyRatio,
            CheckId.FourthPowerDifferenceRatio,
            CheckId.SquareDifferenceRatio,
            CheckId.FiberEnergy,
        ),
    ),
    Runner(check_energy_comparisons, 1, (CheckId.AdditiveEnergyVsProducts, CheckId.MixedThreeHalvesEnergy)),
    Runner(
        check_sum_difference_growth,
        1,
        (
            CheckId.SumDifferenceConditions,
            CheckId.SumDifferenceDifferenceLogFourSevenths,
            CheckId.SumDifferenceSumLog,
            CheckId.SumDifferenceDifferenceLog,
        ),
    ),
]


class _Task(NamedTuple):
    index: int
    runner: int
    sets: Tuple[RSet, ...]
    selected: Tuple[CheckId, ...]
    config: LabConfig


def _run_task(task: _Task) -> List[CheckRecord]:
    runner = RUNNERS[task.runner]
    try:
        records = runner.run(*task.sets, config=task.config)
    except (DomainError, ResourceError, ZeroDivisionError) as err:
        digest = inputs_digest(*task.sets)
        logger.info("skipping %s on %s: %s", runner.run.__name__, digest, err)
        return [skipped_record(check, digest, str(err)) for check in task.selected]
    return [record for record in records if record.check_id in task.selected]


def _summarise(records: List[CheckRecord], selected: List[CheckId]) -> Dict[str, CheckSummary]:
    summary = {}
    for check in selected:
        mine = [r for r in records if r.check_id == check]
        ratios = [r.ratio for r in mine if r.verdict != Verdict.Skipped and r.ratio is not None]
        skipped = sum(1 for r in mine if r.verdict == Verdict.Skipped)
        if not ratios:
            summary[str(check)] = CheckSummary(0, skipped, None, None, None)
            continue
        ordered = np.sort(np.array(ratios, dtype=object))
        middle = len(ordered) // 2
        median = ordered[middle] if len(ordered) % 2 == 1 else (ordered[middle - 1] + ordered[middle]) / 2
        summary[str(check)] = CheckSummary(len(ratios), skipped, np.min(ordered), np.max(ordered), median)
    return summary


def build_corpus(specs: List[str]) -> List[RSet]:
    return [generate(parse_family_spec(spec)) for spec in specs]


def run_suite(
    corpus: List[str],
    registry: List[CheckId] | None = None,
    config: LabConfig = LabConfig(),
    corpus_tag: str | None = None,
) -> SuiteResult:
    """Run the selected checks (all when |registry| is None) on the corpus described by the family specs |corpus|."""
    selected = all_checks() if registry is None else [check for check in all_checks() if check in registry]
    sets = build_corpus(corpus)
    tag = corpus_tag if corpus_tag is not None else ";".join(corpus)
    tasks = []
    for runner_index, runner in enumerate(RUNNERS):
        chosen = tuple(check for check in runner.checks if check in selected)
        if not chosen:
            continue
        for i in range(len(sets)):
            members = tuple(sets[(i + j) % len(sets)] for j in range(runner.arity))
            tasks.append(_Task(len(tasks), runner_index, members, chosen, config))
    logger.info("running %d task(s) over %d set(s) with %d job(s)", len(tasks), len(sets), config.jobs)
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            outputs = list(executor.map(_run_task, tasks, chunksize=4))
    else:
        outputs = [_run_task(task) for task in tasks]

    order = {check: position for position, check in enumerate(all_checks())}
    tagged = [(order[r.check_id], r.inputs_digest, task.index, r, task) for task, records in zip(tasks, outputs) for r in records]
    tagged.sort(key=lambda entry: entry[:3])
    records = [entry[3] for entry in tagged]
    present = {r.check_id for r in records}
    for check in selected:
        if check not in present:
            records.append(skipped_record(check, "", "no corpus member to run on"))
    records.sort(key=lambda r: order[r.check_id])
    result = SuiteResult(records, tag, _summarise(records, selected))

    for _, _, _, record, task in tagged:
        if record.kind == CheckKind.Exact and record.verdict == Verdict.Fail:
            reproducer = {name: A.to_text() for name, A in zip("ABCD", task.sets)}
            raise ExactCheckFailure(record, reproducer, result)
    return result
