#!/usr/bin/env python3

"""
Command-line driver of the laboratory.

    sumproduct stats  --set FILE | --family SPEC
    sumproduct check  [--family SPEC ...] [--set FILE ...] [--corpus FILE] [--registry ID[,ID...]]
    sumproduct search --objective QUANTITY [--exponent E] --family SPEC [--budget N] [--restarts N] [--seed N] [--allow-resize]
    sumproduct gen    KIND PARAM ... [--set-out FILE]

Every command writes one JSON report (to --out, or standard output); `check` can write its records as CSV instead.
A command that stops on an error writes a report whose results are an ErrorReport (status, error kind, message).
Exit status: 0 on success, 1 if an exact check failed or a runtime error occurred, 2 on usage errors.
"""

import argparse
import logging
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List

from sumproduct.config import DEFAULT_CORPUS_FILE, LabConfig, read_corpus_specs, read_lab_config
from sumproduct.core import DomainError, InfeasibleError, ParseError, ResourceError, RSet, SumProductError, rational_parse
from sumproduct.generators import RANDOM_ALGORITHM, MoveRules, generate, parse_family_spec
from sumproduct.ledger import ExactCheckFailure, run_suite
from sumproduct.quantities import CandidateFamily, headline_statistics
from sumproduct.registry import resolve_registry
from sumproduct.report import SCHEMA_VERSION, ErrorReport, Report, Timing, dump_report, records_to_csv
from sumproduct.search import Objective, Quantity, local_search
from sumproduct.util import eprint, format_delta, parse_set_file, seconds_to_delta

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """Raises usage errors as |_UsageError| instead of exiting the process."""

    def error(self, message: str):
        raise _UsageError(message)


class _Phases:
    """Wall-clock time per phase of a command."""

    def __init__(self, verbose: bool) -> None:
        self.verbose = verbose
        self.started = datetime.now(timezone.utc)
        self.phases: Dict[str, float] = {}
        self._last = time.perf_counter()

    def done(self, name: str) -> None:
        now = time.perf_counter()
        self.phases[name] = round(now - self._last, 6)
        self._last = now
        if self.verbose:
            eprint(f"info: {name} took {format_delta(seconds_to_delta(self.phases[name]))}")

    def timing(self) -> Timing:
        return Timing(self.started, dict(self.phases))


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fi:
            fi.write(text)


def _emit(args, command: str, inputs: Dict[str, Any], results: Any, phases: _Phases) -> None:
    report = Report(SCHEMA_VERSION, command, inputs, results, phases.timing() if args.timing else None)
    _write(dump_report(report), args.out)


def _load_set(args) -> RSet:
    if args.set is not None and args.family is not None:
        raise _UsageError("give either --set or --family, not both")
    if args.set is not None:
        match parse_set_file(args.set):
            case str(err):
                raise ParseError(err.removeprefix("error: "))
            case A:
                return A
    if args.family is None:
        raise _UsageError("one of --set or --family is required")
    return generate(parse_family_spec(args.family))


def cmd_stats(args, config: LabConfig) -> int:
    phases = _Phases(args.timing)
    A = _load_set(args)
    phases.done("reading the set")
    family = CandidateFamily(subset_cap=config.d_subset_cap)
    statistics = headline_statistics(A, family, config.energy_precision)
    phases.done("computing statistics")
    if A.has_zero():
        eprint("warning: the set contains 0; ratio sets, multiplicative energies and d(A) are omitted")
    results = dict(statistics, set=A)
    _emit(args, "stats", {"set": args.set, "family": args.family}, results, phases)
    return EXIT_OK


def _corpus_specs(args) -> List[str]:
    specs = list(args.family or []) + [f"from_file,{name}" for name in args.set or []]
    if args.corpus is not None:
        specs += read_corpus_specs(args.corpus)
    return specs or read_corpus_specs(DEFAULT_CORPUS_FILE)


def cmd_check(args, config: LabConfig) -> int:
    phases = _Phases(args.timing)
    specs = _corpus_specs(args)
    tokens = [token for entry in args.registry or [] for token in entry.split(",") if token]
    try:
        registry = resolve_registry(tokens)
    except ValueError as err:
        raise _UsageError(str(err))
    inputs = {
        "corpus": specs,
        "registry": tokens,
        "config": dict(config._asdict()),
        "random_algorithm": RANDOM_ALGORITHM,
    }
    status = EXIT_OK
    try:
        result = run_suite(specs, registry, config)
    except ExactCheckFailure as failure:
        eprint(f"error: {failure}")
        for name, text in failure.reproducer.items():
            eprint(f"  {name} = {{{', '.join(text.split())}}}")
        result = failure.partial
        status = EXIT_FAILURE
    phases.done("running the ledger")
    if args.format == "csv":
        _write(records_to_csv(result.records), args.out)
    else:
        _emit(args, "check", inputs, result, phases)
    return status


def cmd_search(args, config: LabConfig) -> int:
    phases = _Phases(args.timing)
    if args.family is None:
        raise _UsageError("search needs an initial family (--family)")
    try:
        exponent = rational_parse(args.exponent)
        init = parse_family_spec(args.family)
        objective = Objective(Quantity.from_string(args.objective), exponent)
    except (ParseError, ZeroDivisionError, InfeasibleError) as err:
        raise _UsageError(str(err))
    if exponent <= 0:
        raise _UsageError(f"the exponent must be positive, got {exponent}")
    rules = MoveRules(preserve_cardinality=not args.allow_resize, window=config.window)
    try:
        result = local_search(objective, init, args.budget, args.restarts, args.seed, rules, config.jobs, config.energy_precision)
    except (InfeasibleError, DomainError) as err:
        raise _UsageError(str(err))
    phases.done("searching")
    if args.best_set is not None:
        _write(result.best_set.to_text(), args.best_set)
    inputs = {
        "objective": str(objective.quantity),
        "exponent": str(Fraction(exponent)),
        "init": str(init),
        "budget": args.budget,
        "restarts": args.restarts,
        "seed": args.seed,
        "preserve_cardinality": not args.allow_resize,
        "window": config.window,
        "random_algorithm": RANDOM_ALGORITHM,
    }
    _emit(args, "search", inputs, result, phases)
    return EXIT_OK


def cmd_gen(args, config: LabConfig) -> int:
    phases = _Phases(args.timing)
    text = args.family if args.family is not None else ",".join(args.spec)
    if not text:
        raise _UsageError("gen needs a family, e.g. `gen AP 10 1 3`")
    try:
        spec = parse_family_spec(text)
        A = generate(spec)
    except (InfeasibleError, ParseError, ZeroDivisionError) as err:
        raise _UsageError(str(err))
    phases.done("generating")
    if args.set_out is not None:
        _write(A.to_text(), args.set_out)
    inputs = {"family": str(spec), "random_algorithm": RANDOM_ALGORITHM}
    _emit(args, "gen", inputs, {"set": A, "size": len(A), "digest": A.digest()}, phases)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log debugging output to standard error")
    common.add_argument("--config", type=str, default=None, help="JSON file overriding the tunables (caps, budgets, precision)")
    common.add_argument("--jobs", type=int, default=None, help="number of worker processes (overrides the configuration file)")
    common.add_argument("--out", type=str, default=None, help="write the report to this file instead of standard output")
    common.add_argument("--timing", action="store_true", help="include wall-clock times per phase in the report")

    parser = _ArgumentParser(prog="sumproduct", description="Exact-arithmetic laboratory for sum-product estimates.")
    commands = parser.add_subparsers(dest="command", required=True)

    stats = commands.add_parser("stats", parents=[common], help="all sumset sizes and energies of one set")
    stats.add_argument("--set", type=str, default=None, help="set file: one integer or p/q per line")
    stats.add_argument("--family", type=str, default=None, help='family spec, e.g. "GP,4,1,2"')
    stats.set_defaults(handler=cmd_stats)

    check = commands.add_parser("check", parents=[common], help="run the ledger over a corpus")
    check.add_argument("--family", type=str, action="append", help="family spec of a corpus member (repeatable)")
    check.add_argument("--set", type=str, action="append", help="set file of a corpus member (repeatable)")
    check.add_argument("--corpus", type=str, default=None, help="JSON file with a list of family specs")
    check.add_argument("--registry", type=str, action="append", help="check identifiers or groups, comma separated")
    check.add_argument("--format", choices=["json", "csv"], default="json")
    check.set_defaults(handler=cmd_check)

    search = commands.add_parser("search", parents=[common], help="local search for sets with small growth")
    search.add_argument("--objective", choices=[q.value for q in Quantity], required=True)
    search.add_argument("--exponent", type=str, default="3/2", help="normalisation exponent e of |A|^e (default 3/2)")
    search.add_argument("--family", type=str, default=None, help="family spec of the initial set")
    search.add_argument("--budget", type=int, default=200, help="number of sets scored per restart")
    search.add_argument("--restarts", type=int, default=1)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--allow-resize", action="store_true", help="also add and remove elements (by default |A| is kept)")
    search.add_argument("--best-set", type=str, default=None, help="also write the best set to this set file")
    search.set_defaults(handler=cmd_search)

    gen = commands.add_parser("gen", parents=[common], help="generate a set from a family spec")
    gen.add_argument("spec", nargs="*", help="KIND followed by its parameters, e.g. AP 10 1 3 or random 8 1 1000 seed=5")
    gen.add_argument("--family", type=str, default=None, help="the family spec as one comma-separated string")
    gen.add_argument("--set-out", type=str, default=None, help="write the set to this set file")
    gen.set_defaults(handler=cmd_gen)
    return parser


# Writes the error report to the report destination, or to standard output when that cannot be written.
def _emit_error(argv: List[str], command: str | None, out: str | None, kind: str, message: str) -> None:
    report = Report(SCHEMA_VERSION, command or "sumproduct", {"argv": argv}, ErrorReport("error", kind, message), None)
    try:
        _write(dump_report(report), out)
    except OSError:
        _write(dump_report(report), None)


def main(argv: List[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parser().parse_args(argv)
    except _UsageError as err:
        eprint(f"error: {err}")
        _emit_error(argv, None, None, "usage", str(err))
        return EXIT_USAGE
    logging.basicConfig(
        stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(name)s: %(message)s"
    )

    def fail(kind: str, message: str, status: int = EXIT_FAILURE) -> int:
        eprint(f"error: {message}")
        _emit_error(argv, args.command, args.out, kind, message)
        return status

    try:
        config = read_lab_config(args.config) if args.config is not None else LabConfig()
        if args.jobs is not None:
            if args.jobs < 1:
                raise _UsageError(f"--jobs must be at least 1, got {args.jobs}")
            config = config._replace(jobs=args.jobs)
        return args.handler(args, config)
    except _UsageError as err:
        return fail("usage", str(err), EXIT_USAGE)
    except (ParseError, ZeroDivisionError) as err:
        return fail("parse", str(err))
    except OSError as err:
        return fail("io", f"{err.filename}: {err.strerror}")
    except ResourceError as err:
        return fail("resource", str(err))
    except (DomainError, InfeasibleError) as err:
        return fail("domain", str(err))
    except SumProductError as err:
        return fail("internal", str(err))


if __name__ == "__main__":
    sys.exit(main())
