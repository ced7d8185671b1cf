#!/usr/bin/env python3

"""
Consistency of the check registry with the ledger: every check has a description,
is produced by exactly one runner, and that runner receives enough corpus sets.
"""

from collections import Counter
from decimal import Decimal
from fractions import Fraction

import pytest

from sumproduct.ledger import RUNNERS
from sumproduct.registry import (
    STATEMENTS,
    CheckId,
    all_checks,
    check_group,
    check_info,
    exact_record,
    measured_record,
    resolve_registry,
    skipped_record,
)
from sumproduct.verdict import CheckKind, Direction, Verdict


def test_every_check_is_described() -> None:
    for check in CheckId:
        info = check_info(check)
        assert info.statement, f"check {check} has no statement"
        assert 1 <= info.arity <= 4, f"check {check} consumes {info.arity} sets"
        assert check_group(check) and "." in check.value


def test_every_check_has_one_runner() -> None:
    produced = Counter(check for runner in RUNNERS for check in runner.checks)
    for check in CheckId:
        assert produced[check] == 1, f"check {check} is produced by {produced[check]} runners"
    for runner in RUNNERS:
        for check in runner.checks:
            needed = check_info(check).arity
            assert runner.arity >= needed, f"{runner.run.__name__} passes {runner.arity} sets, {check} needs {needed}"


# The numbered inequalities the ledger must house; each needs exactly one check.
NUMBERED_STATEMENTS = [
    "Balog scalar bound",
    "Balog scalar bound with two dilates",
    "Balog planar bound",
    "growth of |A:A+A|",
    "growth of |AA+A|",
    "growth of |AA+A| through E^×_{3/2}",
    "growth of |A:A+A:A|",
    "growth of |AA+AA|",
    "SzT-type cubed energy bound",
    "SzT-type energy bound",
    "SzT-type triple correlation bound",
    "SzT-type sumset lower bound",
    "Solymosi popularity count",
    "Solymosi energy bound",
    "|AA+A|⁴ through energies",
    "|A:A+A|⁴ through energies",
    "|AA+AA|² through E^+_3",
    "|A:A+A:A|² through E^+_3",
    "|AA+A|⁴ through |A-A|",
    "|A:A+A|⁴ through |A-A|",
    "|AA+AA|² through |A-A|",
    "|A:A+A:A|² through |A-A|",
    "Katz-Koester inclusion",
    "small sum-difference conditions",
    "|A-A| with log^{4/7}",
    "|A+A| with log",
    "|A-A| with log",
    "Petridis magnification inequality",
    "Ruzsa triangle inequality",
    "E^+ against |AA+AA|",
    "mixed E_{3/2} bound",
]


def test_statement_audit() -> None:
    stated = Counter(STATEMENTS.values())
    for check in CheckId:
        assert stated[check] == 1, f"check {check} states {stated[check]} statements"
    produced = {check for runner in RUNNERS for check in runner.checks}
    assert len(set(NUMBERED_STATEMENTS)) == len(NUMBERED_STATEMENTS)
    for name in NUMBERED_STATEMENTS:
        assert name in STATEMENTS, f'no check states "{name}"'
        assert STATEMENTS[name] in produced, f'the check of "{name}" is never run'


def test_resolve_registry() -> None:
    assert resolve_registry([]) == all_checks()
    assert resolve_registry(["ruzsa"]) == [CheckId.RuzsaTriangle]
    assert resolve_registry(["chain"]) == [
        CheckId.ChainRatioPlusSet,
        CheckId.ChainProductPlusSet,
        CheckId.ChainRatioPlusRatio,
        CheckId.ChainProductPlusProduct,
    ]
    # Registry order, regardless of the order of the tokens; duplicates collapse.
    assert resolve_registry(["solymosi.energy", "ruzsa.triangle", "ruzsa"]) == [CheckId.RuzsaTriangle, CheckId.SolymosiEnergy]
    with pytest.raises(ValueError):
        resolve_registry(["lemma"])


def test_records() -> None:
    record = exact_record(CheckId.RuzsaTriangle, 7, 9, True, "digest")
    assert record.kind == CheckKind.Exact and record.verdict == Verdict.Pass
    assert record.direction == Direction.Upper
    assert (record.lhs, record.rhs_core) == (Decimal(7), Decimal(9))
    assert abs(record.ratio - Decimal(7) / Decimal(9)) < Decimal("1e-30")
    assert exact_record(CheckId.RuzsaTriangle, 10, 9, False, "digest").verdict == Verdict.Fail

    measured = measured_record(CheckId.BalogProductPlusSet, 22, Decimal(8), "digest")
    assert measured.verdict == Verdict.ReportOnly and measured.ratio == Decimal("2.75")
    assert measured.lhs_exact == 22 and measured.rhs_exact is None
    degenerate = measured_record(CheckId.BalogProductPlusSet, Fraction(1, 2), 0, "digest")
    assert degenerate.ratio is None

    skipped = skipped_record(CheckId.SolymosiEnergy, "digest", "the set contains 0")
    assert skipped.verdict == Verdict.Skipped and skipped.notes == {"reason": "the set contains 0"}
    assert skipped.kind == CheckKind.Measured


if __name__ == "__main__":
    test_every_check_is_described()
    test_every_check_has_one_runner()
    test_statement_audit()
    test_resolve_registry()
    test_records()
