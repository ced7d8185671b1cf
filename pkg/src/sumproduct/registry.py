#!/usr/bin/env python3

"""
This file contains the definitions of all checks the ledger knows about,
and the record produced by running one check on one input.

Every check states one displayed inequality or inclusion. Exact statements are asserted;
statements with a hidden absolute constant (≪, ≫) are measured, i.e. their ratio is reported.
The group of a check is the part of its identifier before the first dot; the command line
accepts both groups and full identifiers as registry filters.
"""

from decimal import Decimal
from enum import StrEnum, unique
from fractions import Fraction
from typing import Dict, List, NamedTuple

from sumproduct.core import DEFAULT_PRECISION, RSet, to_decimal
from sumproduct.util import stable_digest
from sumproduct.verdict import CheckKind, Direction, Verdict


@unique
class CheckId(StrEnum):
    """The different checks of the ledger"""

    # Note: reports list records in the order of these variants.
    # Exact inequalities.
    RuzsaTriangle = "ruzsa.triangle"
    PetridisMagnification = "petridis.magnification"
    ChainRatioPlusSet = "chain.ratio_plus_set"
    ChainProductPlusSet = "chain.product_plus_set"
    ChainRatioPlusRatio = "chain.ratio_plus_ratio"
    ChainProductPlusProduct = "chain.product_plus_product"
    KatzKoesterMultiplicative = "katz_koester.multiplicative"
    KatzKoesterAdditive = "katz_koester.additive"
    DoublingProductBound = "doubling.product_bound"
    DoublingInversion = "doubling.inversion"
    EnergyCauchySchwarz = "energy.cauchy_schwarz"
    ThirdEnergySum = "third_energy.sum"
    ThirdEnergyDifference = "third_energy.difference"
    # Measured statements.
    DoublingRatioBound = "doubling.ratio_bound"
    BalogScalar = "balog.scalar"
    BalogScalarPair = "balog.scalar_pair"
    BalogPlanar = "balog.planar"
    BalogPlanarPair = "balog.planar_pair"
    BalogProductPlusSet = "balog.product_plus_set"
    BalogProductPlusProduct = "balog.product_plus_product"
    SolymosiMaxSumProduct = "solymosi.max_sum_product"
    SolymosiTauCount = "solymosi.tau_count"
    SolymosiEnergy = "solymosi.energy"
    GrowthRatioPlusSet = "growth.ratio_plus_set"
    GrowthProductPlusSet = "growth.product_plus_set"
    GrowthProductPlusSetEnergy = "growth.product_plus_set_energy"
    GrowthRatioPlusRatio = "growth.ratio_plus_ratio"
    GrowthProductPlusProduct = "growth.product_plus_product"
    SztLevelSets = "szt.level_sets"
    SztEnergyCubed = "szt.energy_cubed"
    SztEnergy = "szt.energy"
    SztTripleCorrelation = "szt.triple_correlation"
    SztSumLowerBound = "szt.sum_lower_bound"
    FourthPowerEnergyProduct = "fourth_power.energy.product"
    FourthPowerEnergyRatio = "fourth_power.energy.ratio"
    SquareEnergyProduct = "square.energy.product"
    SquareEnergyRatio = "square.energy.ratio"
    FourthPowerDifferenceProduct = "fourth_power.difference.product"
    FourthPowerDifferenceRatio = "fourth_power.difference.ratio"
    SquareDifferenceProduct = "square.difference.product"
    SquareDifferenceRatio = "square.difference.ratio"
    FiberEnergy = "energy.fiber"
    AdditiveEnergyVsProducts = "energy.additive_vs_products"
    MixedThreeHalvesEnergy = "energy.mixed_three_halves"
    SumDifferenceConditions = "sum_difference.conditions"
    SumDifferenceDifferenceLogFourSevenths = "sum_difference.difference_log_four_sevenths"
    SumDifferenceSumLog = "sum_difference.sum_log"
    SumDifferenceDifferenceLog = "sum_difference.difference_log"


class CheckInfo(NamedTuple):
    kind: CheckKind
    direction: Direction
    # Number of corpus sets the check consumes (A, B, C, D in this order).
    arity: int
    # The statement being checked, with |·| for cardinality and log base 2.
    statement: str


_L = Direction.Lower
_U = Direction.Upper
_E = CheckKind.Exact
_M = CheckKind.Measured

_CHECKS: Dict[CheckId, CheckInfo] = {
    CheckId.RuzsaTriangle: CheckInfo(_E, _U, 3, "|C||A-B| ≤ |A×B - Δ(C)| ≤ |A-C||B-C|"),
    CheckId.PetridisMagnification: CheckInfo(_E, _U, 3, "|B+C+X| ≤ R_B[A]·|C+X| for a minimiser X of |B+Z|/|Z|"),
    CheckId.ChainRatioPlusSet: CheckInfo(_E, _U, 1, "Σ_i |A_{q_i}||A_{q_{i+1}}:A| ≤ |A:A+A|²"),
    CheckId.ChainProductPlusSet: CheckInfo(_E, _U, 1, "Σ_i |A_{q_i}||A·A_{q_{i+1}}| ≤ |AA+A|²"),
    CheckId.ChainRatioPlusRatio: CheckInfo(_E, _U, 1, "Σ_i |A_{q_i}:A||A_{q_{i+1}}:A| ≤ |A:A+A:A|²"),
    CheckId.ChainProductPlusProduct: CheckInfo(_E, _U, 1, "Σ_i |A·A_{q_i}||A·A_{q_{i+1}}| ≤ |AA+AA|²"),
    CheckId.KatzKoesterMultiplicative: CheckInfo(_E, _U, 1, "A·A_s ⊆ AA ∩ s^{-1}AA and A:A_s ⊆ (A:A) ∩ s(A:A) for all s"),
    CheckId.KatzKoesterAdditive: CheckInfo(_E, _U, 1, "A + A_s ⊆ (A+A) ∩ (A+A-s) for all s ∈ A-A"),
    CheckId.DoublingProductBound: CheckInfo(_E, _U, 2, "|AAX|²/(|AA||X|) ≤ |AC|⁴/(|AA||C|³)"),
    CheckId.DoublingInversion: CheckInfo(_E, _U, 1, "d_upper(A) = d_upper(A^{-1}) over an inversion-closed family"),
    CheckId.EnergyCauchySchwarz: CheckInfo(_E, _U, 1, "|A|⁴ ≤ E^+(A)·|A+A|"),
    CheckId.ThirdEnergySum: CheckInfo(_E, _U, 1, "|A|³|A-A| ≤ E^+_3(A+A)"),
    CheckId.ThirdEnergyDifference: CheckInfo(_E, _U, 1, "|A|³|A-A| ≤ E^+_3(A-A)"),
    CheckId.DoublingRatioBound: CheckInfo(_M, _U, 2, "|(A:A)X|²/(|A:A||X|) ≪ |AC|⁴/(|A:A||C|³)"),
    CheckId.BalogScalar: CheckInfo(_M, _L, 3, "|AC+A||BC+B| ≫ |A||B||C|"),
    CheckId.BalogScalarPair: CheckInfo(_M, _L, 4, "|AC+AD||BC+BD| ≫ |B/A||C||D|"),
    CheckId.BalogPlanar: CheckInfo(_M, _L, 3, "|(A×B)·Δ(C) + A×B| ≫ |A||B||C|"),
    CheckId.BalogPlanarPair: CheckInfo(_M, _L, 4, "|(A×B)·Δ(C) + (A×B)·Δ(D)| ≫ |B/A||C||D|"),
    CheckId.BalogProductPlusSet: CheckInfo(_M, _L, 1, "|AA+A| ≫ |A|^{3/2}"),
    CheckId.BalogProductPlusProduct: CheckInfo(_M, _L, 1, "|AA+AA| ≫ |A||A/A|^{1/2}"),
    CheckId.SolymosiMaxSumProduct: CheckInfo(_M, _L, 1, "max(|A+A|, |AA|) ≫ |A|^{4/3} log^{-1/3}|A|"),
    CheckId.SolymosiTauCount: CheckInfo(_M, _U, 2, "|{x : |A ∩ xB| ≥ τ}| ≪ |A+A||B+B|/τ²"),
    CheckId.SolymosiEnergy: CheckInfo(_M, _U, 2, "E^×(A,B) ≪ |A+A||B+B| log(min(|A|,|B|))"),
    CheckId.GrowthRatioPlusSet: CheckInfo(_M, _L, 1, "|A:A+A| ≫ |A|^{3/2+1/82} (log|A|)^{-2/41}"),
    CheckId.GrowthProductPlusSet: CheckInfo(
        _M, _L, 1, "|AA+A| ≫ |AA|^{11/41} |A:A|^{-11/41} |A|^{62/41} (log|A|)^{-2/41}"
    ),
    CheckId.GrowthProductPlusSetEnergy: CheckInfo(
        _M, _L, 1, "|AA+A| ≫ |AA|^{11/41} |A|^{-4/41} (E^×_{3/2}(A))^{22/41} (log|A|)^{-2/41}"
    ),
    CheckId.GrowthRatioPlusRatio: CheckInfo(_M, _L, 1, "|A:A+A:A| ≫ |A:A|^{14/29} |A|^{30/29} (log|A|)^{-2/29}"),
    CheckId.GrowthProductPlusProduct: CheckInfo(
        _M, _L, 1, "|AA+AA| ≫ |AA|^{19/29} |A:A|^{-5/29} |A|^{30/29} (log|A|)^{-2/29}"
    ),
    CheckId.SztLevelSets: CheckInfo(_M, _U, 2, "|{x ∈ A+B : (A*B)(x) ≥ τ}| ≪ |A| d(A) |B|² τ^{-3}"),
    CheckId.SztEnergyCubed: CheckInfo(_M, _U, 1, "E(A)³ ≪ E_{3/2}(A)² c(A) |A|²"),
    CheckId.SztEnergy: CheckInfo(_M, _U, 1, "E(A) ≪ c(A)^{1/2} |A|²"),
    CheckId.SztTripleCorrelation: CheckInfo(
        _M, _U, 3, "Σ_x (A∘A)(B∘B)(C∘C)(x) ≪ (c(A)c(B)c(C))^{1/3} (|A||B||C|)^{2/3} log(min(|A|,|B|,|C|))"
    ),
    CheckId.SztSumLowerBound: CheckInfo(
        _M, _L, 2, "|A ± A_*| ≫ max{...} (log(|A||A_*|))^{-2/9} for SzT-type A, A_* with parameter 2"
    ),
    CheckId.FourthPowerEnergyProduct: CheckInfo(_M, _L, 1, "|AA+A|⁴ ≫ |A|^{-2} E^×_{3/2}(A)² E^+_3(A) log^{-1}|A|"),
    CheckId.FourthPowerEnergyRatio: CheckInfo(_M, _L, 1, "|A:A+A|⁴ ≫ |A|^{-2} E^×_{3/2}(A)² E^+_3(A) log^{-1}|A|"),
    CheckId.SquareEnergyProduct: CheckInfo(_M, _L, 1, "|AA+AA|² ≫ E^+_3(A) log^{-1}|A|"),
    CheckId.SquareEnergyRatio: CheckInfo(_M, _L, 1, "|A:A+A:A|² ≫ E^+_3(A) log^{-1}|A|"),
    CheckId.FourthPowerDifferenceProduct: CheckInfo(_M, _L, 1, "|AA+A|⁴ ≫ |A|^{10}/(|A:A||A-A|²)"),
    CheckId.FourthPowerDifferenceRatio: CheckInfo(_M, _L, 1, "|A:A+A|⁴ ≫ |A|^{10}/(|A:A||A-A|²)"),
    CheckId.SquareDifferenceProduct: CheckInfo(_M, _L, 1, "|AA+AA|² ≫ |A|⁶/|A-A|²"),
    CheckId.SquareDifferenceRatio: CheckInfo(_M, _L, 1, "|A:A+A:A|² ≫ |A|⁶/|A-A|²"),
    CheckId.FiberEnergy: CheckInfo(_M, _L, 1, "|A·A_s|² ≫ |A|^{-2} |A_s| E^+_3(A) log^{-1}|A|"),
    CheckId.AdditiveEnergyVsProducts: CheckInfo(_M, _U, 1, "E^+(A) ≪ |A||AA+AA|"),
    CheckId.MixedThreeHalvesEnergy: CheckInfo(_M, _U, 1, "E^+(A)^{3/2} E^×_{3/2}(A) ≪ E^+_{3/2}(A) |A| |AA+A|²"),
    CheckId.SumDifferenceConditions: CheckInfo(_M, _U, 1, "|(A+A)(A+A)+(A+A)(A+A)| ≪ |A|² and E^+(A)|A-A| ≪ |A|⁴"),
    CheckId.SumDifferenceDifferenceLogFourSevenths: CheckInfo(_M, _U, 1, "|A-A| ≪ |A| log^{4/7}|A| under both conditions"),
    CheckId.SumDifferenceSumLog: CheckInfo(_M, _U, 1, "|A ± A| ≪ |A| log|A| under the first condition with +"),
    CheckId.SumDifferenceDifferenceLog: CheckInfo(_M, _U, 1, "|A - A| ≪ |A| log|A| under the first condition with -"),
}


# Every displayed statement the ledger covers, by name, with the one check that states it.
STATEMENTS: Dict[str, CheckId] = {
    "Ruzsa triangle inequality": CheckId.RuzsaTriangle,
    "Petridis magnification inequality": CheckId.PetridisMagnification,
    "slope chain for |A:A+A|": CheckId.ChainRatioPlusSet,
    "slope chain for |AA+A|": CheckId.ChainProductPlusSet,
    "slope chain for |A:A+A:A|": CheckId.ChainRatioPlusRatio,
    "slope chain for |AA+AA|": CheckId.ChainProductPlusProduct,
    "Katz-Koester inclusion": CheckId.KatzKoesterMultiplicative,
    "Katz-Koester additive inclusion": CheckId.KatzKoesterAdditive,
    "doubling bound for a product set": CheckId.DoublingProductBound,
    "doubling under inversion": CheckId.DoublingInversion,
    "doubling bound for a ratio set": CheckId.DoublingRatioBound,
    "energy Cauchy-Schwarz bound": CheckId.EnergyCauchySchwarz,
    "third energy of A+A": CheckId.ThirdEnergySum,
    "third energy of A-A": CheckId.ThirdEnergyDifference,
    "Balog scalar bound": CheckId.BalogScalar,
    "Balog scalar bound with two dilates": CheckId.BalogScalarPair,
    "Balog planar bound": CheckId.BalogPlanar,
    "Balog planar bound with two dilates": CheckId.BalogPlanarPair,
    "Balog bound for |AA+A|": CheckId.BalogProductPlusSet,
    "Balog bound for |AA+AA|": CheckId.BalogProductPlusProduct,
    "Solymosi sum-product bound": CheckId.SolymosiMaxSumProduct,
    "Solymosi popularity count": CheckId.SolymosiTauCount,
    "Solymosi energy bound": CheckId.SolymosiEnergy,
    "growth of |A:A+A|": CheckId.GrowthRatioPlusSet,
    "growth of |AA+A|": CheckId.GrowthProductPlusSet,
    "growth of |AA+A| through E^×_{3/2}": CheckId.GrowthProductPlusSetEnergy,
    "growth of |A:A+A:A|": CheckId.GrowthRatioPlusRatio,
    "growth of |AA+AA|": CheckId.GrowthProductPlusProduct,
    "SzT-type level sets": CheckId.SztLevelSets,
    "SzT-type cubed energy bound": CheckId.SztEnergyCubed,
    "SzT-type energy bound": CheckId.SztEnergy,
    "SzT-type triple correlation bound": CheckId.SztTripleCorrelation,
    "SzT-type sumset lower bound": CheckId.SztSumLowerBound,
    "|AA+A|⁴ through energies": CheckId.FourthPowerEnergyProduct,
    "|A:A+A|⁴ through energies": CheckId.FourthPowerEnergyRatio,
    "|AA+AA|² through E^+_3": CheckId.SquareEnergyProduct,
    "|A:A+A:A|² through E^+_3": CheckId.SquareEnergyRatio,
    "|AA+A|⁴ through |A-A|": CheckId.FourthPowerDifferenceProduct,
    "|A:A+A|⁴ through |A-A|": CheckId.FourthPowerDifferenceRatio,
    "|AA+AA|² through |A-A|": CheckId.SquareDifferenceProduct,
    "|A:A+A:A|² through |A-A|": CheckId.SquareDifferenceRatio,
    "fiber product through E^+_3": CheckId.FiberEnergy,
    "E^+ against |AA+AA|": CheckId.AdditiveEnergyVsProducts,
    "mixed E_{3/2} bound": CheckId.MixedThreeHalvesEnergy,
    "small sum-difference conditions": CheckId.SumDifferenceConditions,
    "|A-A| with log^{4/7}": CheckId.SumDifferenceDifferenceLogFourSevenths,
    "|A+A| with log": CheckId.SumDifferenceSumLog,
    "|A-A| with log": CheckId.SumDifferenceDifferenceLog,
}


def check_info(check: CheckId) -> CheckInfo:
    return _CHECKS[check]


def check_group(check: CheckId) -> str:
    return check.value.split(".", 1)[0]


def all_checks() -> List[CheckId]:
    return list(CheckId)


# Resolve a registry filter: each token is a full check identifier or a group name.
# An empty filter selects everything.
def resolve_registry(tokens: List[str]) -> List[CheckId]:
    if not tokens:
        return all_checks()
    selected = set()
    for token in tokens:
        matches = [check for check in CheckId if check.value == token or check_group(check) == token]
        if not matches:
            raise ValueError(f'unknown check or group "{token}"; groups are {sorted({check_group(c) for c in CheckId})}')
        selected.update(matches)
    return [check for check in CheckId if check in selected]


class CheckRecord(NamedTuple):
    """One verified or measured instance of a check."""

    check_id: CheckId
    kind: CheckKind
    lhs: Decimal
    # The right-hand side with the implied constant stripped (log factors included).
    rhs_core: Decimal
    # lhs/rhs_core, or None when the right-hand side degenerates to 0.
    ratio: Decimal | None
    direction: Direction
    verdict: Verdict
    inputs_digest: str
    # Exact values of both sides, when they are rational.
    lhs_exact: Fraction | None
    rhs_exact: Fraction | None
    # Free-form details: transformations applied to the input, auxiliary quantities, skip reasons.
    notes: Dict[str, str]


def inputs_digest(*sets: RSet) -> str:
    return stable_digest([A.digest() for A in sets])


def _ratio(lhs: Decimal, rhs: Decimal, precision: int) -> Decimal | None:
    if rhs == 0:
        return None
    return to_decimal(lhs / rhs, precision)


def exact_record(
    check: CheckId,
    lhs: Fraction | int,
    rhs: Fraction | int,
    holds: bool,
    digest: str,
    notes: Dict[str, str] | None = None,
    precision: int = DEFAULT_PRECISION,
) -> CheckRecord:
    """Record of an exact statement lhs ≤ rhs (or an inclusion encoded as counts); |holds| is the verdict."""
    lhs_d = to_decimal(lhs, precision)
    rhs_d = to_decimal(rhs, precision)
    return CheckRecord(
        check,
        CheckKind.Exact,
        lhs_d,
        rhs_d,
        _ratio(lhs_d, rhs_d, precision),
        check_info(check).direction,
        Verdict.Pass if holds else Verdict.Fail,
        digest,
        Fraction(lhs),
        Fraction(rhs),
        dict(notes or {}),
    )


def measured_record(
    check: CheckId,
    lhs: Fraction | int | Decimal,
    rhs: Fraction | int | Decimal,
    digest: str,
    notes: Dict[str, str] | None = None,
    precision: int = DEFAULT_PRECISION,
) -> CheckRecord:
    """Record of an asymptotic statement: only the ratio lhs/rhs_core is reported."""
    lhs_d = to_decimal(lhs, precision)
    rhs_d = to_decimal(rhs, precision)
    return CheckRecord(
        check,
        CheckKind.Measured,
        lhs_d,
        rhs_d,
        _ratio(lhs_d, rhs_d, precision),
        check_info(check).direction,
        Verdict.ReportOnly,
        digest,
        None if isinstance(lhs, Decimal) else Fraction(lhs),
        None if isinstance(rhs, Decimal) else Fraction(rhs),
        dict(notes or {}),
    )


def skipped_record(check: CheckId, digest: str, reason: str) -> CheckRecord:
    info = check_info(check)
    return CheckRecord(
        check, info.kind, Decimal(0), Decimal(0), None, info.direction, Verdict.Skipped, digest, None, None, {"reason": reason}
    )
