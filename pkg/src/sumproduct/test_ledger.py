#!/usr/bin/env python3

"""
Tests for the ledger: individual check groups on hand-computed sets, and whole suite runs.
"""

import random
from decimal import Decimal

import pytest

from sumproduct import ledger
from sumproduct.config import BUILTIN_CORPUS, LabConfig
from sumproduct.core import rset_from, to_decimal
from sumproduct.ledger import (
    ExactCheckFailure,
    Runner,
    check_balog_planar,
    check_balog_scalar,
    check_katz_koester,
    check_main_theorems,
    check_szt_energies,
    check_tau_popularity,
    run_suite,
)
from sumproduct.quantities import katz_koester_check
from sumproduct.registry import CheckId, all_checks, exact_record, inputs_digest, resolve_registry
from sumproduct.report import SCHEMA_VERSION, Report, dump_report, load_report
from sumproduct.setops import difference_set, ratio_set
from sumproduct.verdict import CheckKind, Verdict

CORPUS = ["AP,6", "GP,5,1,2", "random_int,6,1,40,seed=3"]


def test_balog_checks() -> None:
    A, C = rset_from([1, 2]), rset_from([1])
    [planar] = check_balog_planar(A, A, C)
    assert (planar.lhs_exact, planar.rhs_exact) == (9, 4), f"expected 9 against 4, got {planar.lhs_exact} against {planar.rhs_exact}"
    assert planar.verdict == Verdict.ReportOnly

    B = rset_from([1, 2, 4])
    scalar, pair = check_balog_scalar(B, B, B, B)
    assert (scalar.lhs_exact, scalar.rhs_exact) == (144, 27)
    assert (pair.lhs_exact, pair.rhs_exact) == (225, 45)
    assert pair.check_id == CheckId.BalogScalarPair


def test_tau_popularity() -> None:
    A = rset_from([1, 2, 4])
    [record] = check_tau_popularity(A, A)
    assert record.notes["tau"] == "2", f"the largest ratio is at τ = 2, got {record.notes['tau']}"
    assert record.notes["counts"] == "5 3 1"
    assert record.notes["within_calibration"] == "true"
    assert record.ratio == to_decimal(Decimal(3) / Decimal(9))


def test_small_sets_are_skipped_inside_a_group() -> None:
    A = rset_from([1, 2, 3])
    records = check_szt_energies(A, A, rset_from([5]))
    assert [r.check_id for r in records] == [CheckId.SztEnergyCubed, CheckId.SztEnergy, CheckId.SztTripleCorrelation]
    assert records[2].verdict == Verdict.Skipped and "reason" in records[2].notes


def test_katz_koester() -> None:
    A = rset_from([1, 2, 3, 4, 8])
    multiplicative, additive = check_katz_koester(A)
    assert multiplicative.verdict == Verdict.Pass and additive.verdict == Verdict.Pass
    assert multiplicative.notes["slopes"] == str(len(ratio_set(A, A)))
    assert additive.notes["shifts"] == str(len(difference_set(A, A)))

    [geometric, _] = check_katz_koester(rset_from([1, 2, 4]))
    assert geometric.verdict == Verdict.Pass
    # The swapped dilates only hold at s = 1 for {1, 2, 4}.
    assert geometric.notes["swapped_dilates_hold"] == "false"
    assert geometric.notes["swapped_dilates_fail_at"] == "1/4 1/2 2 4"
    assert geometric.notes["swapped_dilates_hold_for"] == "1"
    [single, _] = check_katz_koester(rset_from([3]))
    assert single.notes["swapped_dilates_hold"] == "true" and single.notes["swapped_dilates_fail_at"] == ""

    rng = random.Random(31)
    for _ in range(40):
        B = rset_from(rng.sample(range(1, 41), rng.randint(1, 12)))
        [record, _] = check_katz_koester(B)
        assert record.verdict == Verdict.Pass, f"verified inclusion fails on {B}"
        failing = [str(s) for s in ratio_set(B, B) if katz_koester_check(B, s).notes["swapped_dilates_hold"] == "false"]
        assert record.notes["swapped_dilates_fail_at"] == " ".join(failing), f"per-set report disagrees on {B}"


def test_ratio_plus_set_grows_along_progressions() -> None:
    ratios = []
    for n in (8, 16, 32, 64):
        records = check_main_theorems(rset_from(range(1, n + 1)))
        by_check = {r.check_id: r for r in records}
        record = by_check[CheckId.GrowthRatioPlusSet]
        assert record.verdict == Verdict.ReportOnly and record.ratio > 0, f"unexpected record at n = {n}: {record}"
        ratios.append(record.ratio)
    assert ratios == sorted(ratios), f"|A:A+A| should outgrow |A|^(3/2+1/82) on progressions, got ratios {ratios}"
    # At n = 64, |A:A| is about 2500: |A:A+A:A| alone exceeds the pair budget, and only its record is skipped.
    skipped = by_check[CheckId.GrowthRatioPlusRatio]
    assert skipped.verdict == Verdict.Skipped and "budget" in skipped.notes["reason"]
    assert [r.check_id for r in records if r.verdict == Verdict.Skipped] == [CheckId.GrowthRatioPlusRatio]


def test_run_suite() -> None:
    result = run_suite(CORPUS)
    assert {r.check_id for r in result.records} == set(all_checks())
    assert set(result.summary) == {str(check) for check in all_checks()}
    for record in result.records:
        if record.kind == CheckKind.Exact and record.verdict != Verdict.Skipped:
            assert record.verdict == Verdict.Pass, f"{record.check_id} failed on {record.inputs_digest}"
    order = [all_checks().index(r.check_id) for r in result.records]
    assert order == sorted(order), "records must be listed in registry order"
    summary = result.summary[str(CheckId.BalogProductPlusSet)]
    assert summary.count == 3 and summary.skipped == 0
    assert summary.min_ratio <= summary.median_ratio <= summary.max_ratio
    assert result.corpus_tag == ";".join(CORPUS)
    assert run_suite(CORPUS) == result, "suite runs must be deterministic"


def test_szt_report_is_reproducible() -> None:
    corpus = [spec for n in (8, 16, 32) for spec in (f"AP,{n}", f"GP,{n},1,2", f"random_int,{n},1,1000,seed={n}")]
    registry = resolve_registry(["szt.level_sets"])

    def report() -> str:
        result = run_suite(corpus, registry)
        return dump_report(Report(SCHEMA_VERSION, "check", {"corpus": corpus, "registry": ["szt.level_sets"]}, result, None))

    first = report()
    assert report() == first, "two runs over the same corpus must give byte-identical reports"
    result = load_report(first).results
    assert len(result.records) == len(corpus)
    for record in result.records:
        assert record.verdict == Verdict.ReportOnly and record.ratio is not None and record.ratio.is_finite(), f"{record}"
    # The single constant κ of the corpus: the largest ratio against |A|·d_upper(A).
    kappa = result.summary[str(CheckId.SztLevelSets)].max_ratio
    assert kappa.is_finite() and all(record.ratio <= kappa for record in result.records)


def test_tau_count_within_calibration() -> None:
    config = LabConfig()
    for corpus in (BUILTIN_CORPUS, ["AP,8", "GP,8,1,2", "random_int,8,1,100,seed=1"]):
        result = run_suite(corpus, resolve_registry(["solymosi.tau_count"]), config)
        assert len(result.records) == len(corpus)
        for record in result.records:
            assert record.ratio is not None and record.ratio <= config.tau_calibration, f"τ ratio {record.ratio} above 16 on {record.inputs_digest}"
            assert record.notes["within_calibration"] == "true"


def test_registry_filter() -> None:
    result = run_suite(CORPUS, resolve_registry(["ruzsa"]), corpus_tag="small")
    assert [r.check_id for r in result.records] == [CheckId.RuzsaTriangle] * 3
    assert list(result.summary) == ["ruzsa.triangle"]
    assert result.corpus_tag == "small"
    assert run_suite(CORPUS, []).records == []


def test_parallel_suite_is_identical() -> None:
    registry = resolve_registry(["chain", "energy", "balog"])
    sequential = run_suite(CORPUS, registry)
    parallel = run_suite(CORPUS, registry, LabConfig(jobs=2))
    assert parallel == sequential


def test_preconditions_are_skipped() -> None:
    result = run_suite(["AP,4,0,1"], resolve_registry(["ruzsa", "solymosi", "growth"]))
    by_check = {r.check_id: r for r in result.records}
    assert by_check[CheckId.RuzsaTriangle].verdict == Verdict.Pass
    for check in (CheckId.SolymosiEnergy, CheckId.SolymosiTauCount, CheckId.GrowthRatioPlusSet):
        assert by_check[check].verdict == Verdict.Skipped, f"{check} should be skipped on a set containing 0"
        assert "0" in by_check[check].notes["reason"]
    # The sum-product bound needs no division.
    assert by_check[CheckId.SolymosiMaxSumProduct].verdict == Verdict.ReportOnly

    tight = run_suite(["AP,20"], resolve_registry(["petridis"]), LabConfig(magnification_cap=10))
    [record] = tight.records
    assert record.verdict == Verdict.Skipped and "cap" in record.notes["reason"]


def _failing(A, B, config=LabConfig()):
    return [exact_record(CheckId.RuzsaTriangle, 2, 1, False, inputs_digest(A, B))]


def test_exact_failure_aborts(monkeypatch) -> None:
    monkeypatch.setattr(ledger, "RUNNERS", [Runner(_failing, 2, (CheckId.RuzsaTriangle,))])
    with pytest.raises(ExactCheckFailure) as info:
        run_suite(["AP,3", "GP,3,1,2"], [CheckId.RuzsaTriangle])
    failure = info.value
    assert failure.record.verdict == Verdict.Fail
    # The first failing record in report order; its sets are listed as A, B.
    assert sorted(failure.reproducer) == ["A", "B"]
    assert sorted(failure.reproducer.values()) == ["1\n2\n3\n", "1\n2\n4\n"]
    assert len(failure.partial.records) == 2


if __name__ == "__main__":
    test_balog_checks()
    test_tau_popularity()
    test_small_sets_are_skipped_inside_a_group()
    test_katz_koester()
    test_ratio_plus_set_grows_along_progressions()
    test_run_suite()
    test_szt_report_is_reproducible()
    test_tau_count_within_calibration()
    test_registry_filter()
    test_parallel_suite_is_identical()
    test_preconditions_are_skipped()
