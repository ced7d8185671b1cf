#!/usr/bin/env python3

"""
Tests for the report format: JSON serialization keeps exact values and types, and the CSV projection.
"""

import json
from datetime import datetime, timezone
from fractions import Fraction

import pytest

from sumproduct.core import rset_from
from sumproduct.generators import parse_family_spec
from sumproduct.ledger import run_suite
from sumproduct.quantities import headline_statistics
from sumproduct.registry import resolve_registry
from sumproduct.report import (
    CSV_COLUMNS,
    DEFAULT_CLASS_REGISTRY,
    SCHEMA_VERSION,
    CustomJSONDecoder,
    Report,
    Timing,
    dump_report,
    load_report,
    records_to_csv,
)
from sumproduct.search import Objective, Quantity, local_search
from sumproduct.verdict import Direction, Verdict


def _suite_report(timing: Timing | None = None) -> Report:
    corpus = ["AP,4", "GP,4,1,2"]
    result = run_suite(corpus, resolve_registry(["ruzsa", "doubling", "balog.planar"]))
    return Report(SCHEMA_VERSION, "check", {"corpus": corpus, "registry": ["ruzsa"]}, result, timing)


def test_suite_report_survives_json() -> None:
    timing = Timing(datetime(2026, 1, 2, 3, 4, 5, tzinfo=timezone.utc), {"running the ledger": 0.25})
    report = _suite_report(timing)
    text = dump_report(report)
    assert text.endswith("}\n")
    loaded = load_report(text)
    assert loaded == report, "loading a dumped report must give the same report"
    assert loaded.timing.started.tzinfo is not None

    raw = json.loads(text)
    record = raw["__data__"]["results"]["__data__"]["records"][0]["__data__"]
    assert record["check_id"] == {"__type__": "CheckId", "__value__": "ruzsa.triangle"}
    assert set(record["lhs_exact"]) == {"__type__", "numerator", "denominator", "decimal"}


def test_reports_are_deterministic() -> None:
    assert dump_report(_suite_report()) == dump_report(_suite_report())


def test_search_and_stats_reports() -> None:
    objective = Objective(Quantity.ProductPlusSet, Fraction(3, 2))
    result = local_search(objective, parse_family_spec("GP,5,1,2"), budget=15)
    report = Report(SCHEMA_VERSION, "search", {"objective": str(objective)}, result, None)
    assert load_report(dump_report(report)) == report

    statistics = dict(headline_statistics(rset_from([1, 2, 4])), set=rset_from([1, 2, 4]))
    report = Report(SCHEMA_VERSION, "stats", {"family": "GP,3,1,2"}, statistics, None)
    loaded = load_report(dump_report(report))
    assert loaded.results == statistics
    assert loaded.results["d_upper"].witness == statistics["d_upper"].witness


def test_malformed_reports() -> None:
    with pytest.raises(ValueError):
        load_report('{"__type__": "Mystery", "__data__": {}}')
    with pytest.raises(ValueError):
        load_report("[1, 2, 3]")

    decoder = CustomJSONDecoder(DEFAULT_CLASS_REGISTRY)
    assert decoder.deserialize_obj({"__type__": "Verdict", "__value__": "FAIL"}) == Verdict.Fail
    assert decoder.deserialize_obj({"__type__": "Direction", "__value__": "lower"}) == Direction.Lower
    with pytest.raises(KeyError):
        decoder.deserialize_obj({"__type__": "CheckKind", "__value__": "approximate"})


def test_csv() -> None:
    records = _suite_report().results.records
    lines = records_to_csv(records).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == len(records) + 1
    assert lines[1].startswith("ruzsa.triangle,exact,")
    assert lines[1].endswith(",pass")


if __name__ == "__main__":
    test_suite_report_survives_json()
    test_reports_are_deterministic()
    test_search_and_stats_reports()
    test_malformed_reports()
    test_csv()
