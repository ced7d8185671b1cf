from enum import StrEnum


class Verdict(StrEnum):
    # An exact inequality or inclusion holds on this input.
    Pass = "pass"
    # An exact inequality or inclusion fails: this aborts the suite.
    Fail = "FAIL"
    # Asymptotic statement: the ratio is recorded, nothing is asserted.
    ReportOnly = "report-only"
    # The check could not run on this input (precondition, cap or budget); the reason is in the notes.
    Skipped = "skipped"

    @staticmethod
    def from_string(s: str):
        return {
            "pass": Verdict.Pass,
            "FAIL": Verdict.Fail,
            "report-only": Verdict.ReportOnly,
            "skipped": Verdict.Skipped,
        }[s]


class CheckKind(StrEnum):
    # The statement has no hidden constant: it is asserted exactly.
    Exact = "exact"
    # The statement hides an absolute constant behind ≪ or ≫: only the ratio is measured.
    Measured = "measured"

    @staticmethod
    def from_string(s: str):
        return {"exact": CheckKind.Exact, "measured": CheckKind.Measured}[s]


class Direction(StrEnum):
    # lhs ≫ rhs_core: the ratio lhs/rhs_core should stay bounded below.
    Lower = "lower"
    # lhs ≪ rhs_core: the ratio lhs/rhs_core should stay bounded above.
    Upper = "upper"

    @staticmethod
    def from_string(s: str):
        return {"lower": Direction.Lower, "upper": Direction.Upper}[s]
