"""
Reports: the single JSON document every command writes, and its CSV projection.

Serialization keeps enough type information to rebuild the original objects:
NamedTuples, enums, tuples, sets of rationals, fractions and decimals are tagged with "__type__".
Fractions carry their numerator and denominator next to a decimal rendering, so exact values survive.
"""

import csv
import io
import json
from collections import OrderedDict
from datetime import datetime
from decimal import Decimal
from enum import StrEnum
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple

from dateutil import parser

from sumproduct.core import PlanarSet, RSet, format_rational, planar_from, rational_parse, rset_from, to_decimal
from sumproduct.ledger import CheckSummary, SuiteResult
from sumproduct.quantities import DoublingWitness
from sumproduct.registry import CheckId, CheckRecord
from sumproduct.search import SearchResult
from sumproduct.verdict import CheckKind, Direction, Verdict

SCHEMA_VERSION = "1"

CSV_COLUMNS = ["check_id", "kind", "lhs", "rhs_core", "ratio", "verdict"]


class Timing(NamedTuple):
    # Start of the command, in UTC.
    started: datetime
    # Wall-clock seconds per phase, in the order the phases ran.
    phases: Dict[str, float]


class Report(NamedTuple):
    schema_version: str
    command: str
    # The command-line inputs: everything needed to re-run the command.
    inputs: Dict[str, Any]
    # A SuiteResult, a SearchResult, a map of statistics, or an ErrorReport.
    results: Any
    # Omitted (None) unless asked for, so that equal inputs give byte-identical reports.
    timing: Timing | None


# The results of a command that stopped on an error; |status| is always "error".
class ErrorReport(NamedTuple):
    status: str
    # "usage", "parse", "io", "domain", "resource" or "internal"
    error_kind: str
    message: str


class CustomJSONEncoder:
    """Handles serialization of the laboratory's objects to a JSON-serializable format"""

    @staticmethod
    def serialize_obj(obj):
        # NamedTuples (before plain tuples: they are tuples too)
        if hasattr(obj, "_asdict") and hasattr(obj, "_fields"):
            return {
                "__type__": obj.__class__.__name__,
                "__data__": OrderedDict((field, CustomJSONEncoder.serialize_obj(getattr(obj, field))) for field in obj._fields),
            }
        elif isinstance(obj, StrEnum):
            return {"__type__": obj.__class__.__name__, "__value__": obj.value}
        elif isinstance(obj, bool) or obj is None:
            return obj
        elif isinstance(obj, Fraction):
            return {
                "__type__": "Fraction",
                "numerator": obj.numerator,
                "denominator": obj.denominator,
                "decimal": str(to_decimal(obj)),
            }
        elif isinstance(obj, Decimal):
            return {"__type__": "Decimal", "__value__": str(obj)}
        elif isinstance(obj, RSet):
            return {"__type__": "RSet", "__data__": [format_rational(x) for x in obj]}
        elif isinstance(obj, PlanarSet):
            return {"__type__": "PlanarSet", "__data__": [[format_rational(x), format_rational(y)] for (x, y) in obj]}
        elif isinstance(obj, datetime):
            return {"__type__": "datetime", "__value__": obj.isoformat()}
        elif isinstance(obj, str):
            return obj
        elif hasattr(obj, "keys"):
            return OrderedDict((str(key), CustomJSONEncoder.serialize_obj(value)) for key, value in obj.items())
        elif isinstance(obj, tuple):
            return {"__type__": "tuple", "__data__": [CustomJSONEncoder.serialize_obj(item) for item in obj]}
        elif hasattr(obj, "__iter__"):
            return [CustomJSONEncoder.serialize_obj(item) for item in obj]
        else:
            return obj


class CustomJSONDecoder:
    """Handles deserialization from JSON format back to the laboratory's objects"""

    def __init__(self, class_registry: Dict[str, type] | None = None):
        self.class_registry = dict(class_registry or {})

    def deserialize_obj(self, obj):
        if isinstance(obj, list):
            return [self.deserialize_obj(item) for item in obj]
        if not isinstance(obj, dict):
            return obj
        if "__type__" not in obj:
            return {key: self.deserialize_obj(value) for key, value in obj.items()}
        type_name = obj["__type__"]
        match type_name:
            case "Fraction":
                return Fraction(obj["numerator"], obj["denominator"])
            case "Decimal":
                return Decimal(obj["__value__"])
            case "RSet":
                return rset_from(rational_parse(x) for x in obj["__data__"])
            case "PlanarSet":
                return planar_from((rational_parse(x), rational_parse(y)) for (x, y) in obj["__data__"])
            case "datetime":
                return parser.isoparse(obj["__value__"])
            case "tuple":
                return tuple(self.deserialize_obj(item) for item in obj["__data__"])
        if type_name not in self.class_registry:
            raise ValueError(f"cannot deserialize object of unknown type '{type_name}'")
        target_class = self.class_registry[type_name]
        if issubclass(target_class, StrEnum):
            # Enums with their own parser go through it.
            parse = getattr(target_class, "from_string", target_class)
            return parse(obj["__value__"])
        if "__data__" in obj:
            return target_class(**{key: self.deserialize_obj(value) for key, value in obj["__data__"].items()})
        raise ValueError(f"cannot deserialize object of type '{type_name}': missing __data__ or __value__")


DEFAULT_CLASS_REGISTRY: Dict[str, type] = {
    "Report": Report,
    "Timing": Timing,
    "ErrorReport": ErrorReport,
    "SuiteResult": SuiteResult,
    "CheckSummary": CheckSummary,
    "CheckRecord": CheckRecord,
    "SearchResult": SearchResult,
    "DoublingWitness": DoublingWitness,
    "CheckId": CheckId,
    "CheckKind": CheckKind,
    "Direction": Direction,
    "Verdict": Verdict,
}


def dump_report(report: Report) -> str:
    return json.dumps(CustomJSONEncoder.serialize_obj(report), indent=4, ensure_ascii=False) + "\n"


def load_report(text: str, class_registry: Dict[str, type] = DEFAULT_CLASS_REGISTRY) -> Report:
    report = CustomJSONDecoder(class_registry).deserialize_obj(json.loads(text))
    if not isinstance(report, Report):
        raise ValueError("the document is not a report")
    return report


def records_to_csv(records: List[CheckRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.check_id.value, r.kind.value, str(r.lhs), str(r.rhs_core), "" if r.ratio is None else str(r.ratio), r.verdict.value])
    return out.getvalue()
