#!/usr/bin/env python3

"""
Deterministic construction of the set families the ledger and the search run on:
arithmetic and geometric progressions (the additively resp. multiplicatively structured extremes),
intervals, seeded random integer sets, unions of both progressions, sets read from a file,
and perturbed progressions.

A family is described by a |FamilySpec|, whose textual form is
    KIND,positional,...,key=value,...
for instance "AP,10,1,3" or "random_int,8,low=1,high=100,seed=7".
"""

import logging
import random
from enum import StrEnum, unique
from fractions import Fraction
from typing import Dict, List, NamedTuple

from sumproduct.config import DEFAULT_WINDOW
from sumproduct.core import DomainError, InfeasibleError, ParseError, RSet, rational_parse, rset_from
from sumproduct.util import parse_set_file

logger = logging.getLogger(__name__)

# Named and versioned, so that reports can state how their random sets came about.
RANDOM_ALGORITHM = "python-random-mt19937/v1"


@unique
class FamilyKind(StrEnum):
    AP = "AP"
    GP = "GP"
    Interval = "interval"
    RandomInt = "random_int"
    UnionAPGP = "union_AP_GP"
    FromFile = "from_file"
    Perturb = "perturb"

    @staticmethod
    def from_string(s: str):
        return {
            "AP": FamilyKind.AP,
            "GP": FamilyKind.GP,
            "interval": FamilyKind.Interval,
            "random_int": FamilyKind.RandomInt,
            # Accepted as a shorthand on the command line.
            "random": FamilyKind.RandomInt,
            "union_AP_GP": FamilyKind.UnionAPGP,
            "from_file": FamilyKind.FromFile,
            "perturb": FamilyKind.Perturb,
        }[s]


# The positional parameters of each family, in order; everything else must be given as key=value.
_POSITIONAL: Dict[FamilyKind, List[str]] = {
    FamilyKind.AP: ["n", "start", "step"],
    FamilyKind.GP: ["n", "start", "ratio"],
    FamilyKind.Interval: ["start", "end"],
    FamilyKind.RandomInt: ["n", "low", "high"],
    FamilyKind.UnionAPGP: ["n", "start", "step"],
    FamilyKind.FromFile: ["path"],
    FamilyKind.Perturb: ["n", "start", "step"],
}

_DEFAULTS: Dict[FamilyKind, Dict[str, str]] = {
    FamilyKind.AP: {"start": "1", "step": "1"},
    FamilyKind.GP: {"start": "1", "ratio": "2"},
    FamilyKind.Interval: {},
    FamilyKind.RandomInt: {"low": "1", "high": "100", "seed": "0"},
    FamilyKind.UnionAPGP: {"start": "1", "step": "1", "ratio": "2"},
    FamilyKind.FromFile: {},
    FamilyKind.Perturb: {"start": "1", "step": "1", "edits": "1", "seed": "0", "high": str(DEFAULT_WINDOW)},
}


class FamilySpec(NamedTuple):
    kind: FamilyKind
    # Parameter name to its textual value; see |_POSITIONAL| and |_DEFAULTS| for the names per kind.
    parameters: Dict[str, str]

    def __str__(self) -> str:
        positional = _POSITIONAL[self.kind]
        fields = [str(self.kind)] + [self.parameters[name] for name in positional if name in self.parameters]
        fields += [f"{key}={value}" for key, value in sorted(self.parameters.items()) if key not in positional]
        return ",".join(fields)

    def rational(self, name: str) -> Fraction:
        return rational_parse(self.parameters[name])

    def integer(self, name: str) -> int:
        value = self.rational(name)
        if value.denominator != 1:
            raise ParseError(f'parameter {name} of {self} must be an integer, got "{self.parameters[name]}"')
        return value.numerator


def parse_family_spec(text: str) -> FamilySpec:
    fields = [field.strip() for field in text.split(",") if field.strip()]
    if not fields:
        raise ParseError("empty family spec")
    try:
        kind = FamilyKind.from_string(fields[0])
    except KeyError:
        raise ParseError(f'unknown family "{fields[0]}"; expected one of {", ".join(k.value for k in FamilyKind)}')
    positional = _POSITIONAL[kind]
    parameters = dict(_DEFAULTS[kind])
    index = 0
    for field in fields[1:]:
        if "=" in field:
            key, value = field.split("=", 1)
            parameters[key.strip()] = value.strip()
        else:
            if index >= len(positional):
                raise ParseError(f'family {kind} takes at most {len(positional)} positional parameters, got "{text}"')
            parameters[positional[index]] = field
            index += 1
    missing = [name for name in positional if name not in parameters]
    if missing:
        raise ParseError(f'family spec "{text}" is missing {", ".join(missing)}')
    spec = FamilySpec(kind, parameters)
    _validate(spec)
    return spec


def _validate(spec: FamilySpec) -> None:
    if "n" in spec.parameters and spec.integer("n") < 1:
        raise InfeasibleError(f"family {spec} needs n ≥ 1")
    if spec.kind in (FamilyKind.AP, FamilyKind.Perturb, FamilyKind.UnionAPGP) and spec.rational("step") == 0:
        raise InfeasibleError(f"family {spec} needs a nonzero step")
    if spec.kind in (FamilyKind.GP, FamilyKind.UnionAPGP):
        if spec.rational("ratio") in (0, 1, -1):
            raise InfeasibleError(f"family {spec} needs a ratio outside {{0, 1, -1}}")
        if spec.rational("start") == 0:
            raise InfeasibleError(f"family {spec} needs a nonzero start")


def _progression(n: int, start: Fraction, step: Fraction) -> RSet:
    return rset_from(start + i * step for i in range(n))


def _random_int(n: int, low: int, high: int, seed: int) -> RSet:
    if high - low + 1 < n:
        raise InfeasibleError(f"cannot draw {n} distinct integers from [{low}, {high}]")
    rng = random.Random(seed)
    values: set = set()
    # Collisions are resampled; the stream only depends on the seed.
    while len(values) < n:
        values.add(rng.randint(low, high))
    return rset_from(values)


def _perturb(spec: FamilySpec) -> RSet:
    base = _progression(spec.integer("n"), spec.rational("start"), spec.rational("step"))
    high, edits = spec.integer("high"), spec.integer("edits")
    pool = [Fraction(x) for x in range(1, high + 1) if Fraction(x) not in base.members]
    if edits > len(base) or edits > len(pool):
        raise InfeasibleError(f"family {spec} cannot replace {edits} of {len(base)} elements from [1, {high}]")
    rng = random.Random(spec.integer("seed"))
    values = list(base)
    # Distinct positions, distinct replacements: exactly |edits| elements leave the progression.
    for position, replacement in zip(rng.sample(range(len(values)), edits), rng.sample(pool, edits)):
        values[position] = replacement
    return rset_from(values)


# The first ⌈n/2⌉ terms of the progression, then terms of start·ratio^i (i = 0, 1, ...) not yet present until there are n.
# |ratio| ≠ 0, 1 makes the geometric terms pairwise distinct, so this terminates.
def _union_ap_gp(spec: FamilySpec) -> RSet:
    n, start, ratio = spec.integer("n"), spec.rational("start"), spec.rational("ratio")
    values = set(_progression((n + 1) // 2, start, spec.rational("step")))
    term = start
    while len(values) < n:
        values.add(term)
        term *= ratio
    return rset_from(values)


def generate(spec: FamilySpec) -> RSet:
    """The set described by |spec|; a pure function of the spec."""
    _validate(spec)
    match spec.kind:
        case FamilyKind.AP:
            return _progression(spec.integer("n"), spec.rational("start"), spec.rational("step"))
        case FamilyKind.GP:
            start, ratio = spec.rational("start"), spec.rational("ratio")
            return rset_from(start * ratio**i for i in range(spec.integer("n")))
        case FamilyKind.Interval:
            start, end = spec.integer("start"), spec.integer("end")
            if end < start:
                raise InfeasibleError(f"the interval [{start}, {end}] is empty")
            return rset_from(range(start, end + 1))
        case FamilyKind.RandomInt:
            return _random_int(spec.integer("n"), spec.integer("low"), spec.integer("high"), spec.integer("seed"))
        case FamilyKind.UnionAPGP:
            return _union_ap_gp(spec)
        case FamilyKind.FromFile:
            match parse_set_file(spec.parameters["path"]):
                case str(err):
                    raise ParseError(err)
                case A if not A:
                    raise InfeasibleError(f"the set file {spec.parameters['path']} contains no elements")
                case A:
                    return A
        case FamilyKind.Perturb:
            return _perturb(spec)
    raise DomainError(f"unhandled family {spec.kind}")


class MoveRules(NamedTuple):
    remove: bool = True
    replace: bool = True
    add: bool = True
    # Move A onto the progression of length |A| through two of its elements.
    respace: bool = True
    # Only offer moves that keep |A|: replacements and respacings.
    # Without it, objectives with a positive exponent descend to a singleton.
    preserve_cardinality: bool = True
    # Replacement and added elements come from [1, window] and the divisors and small multiples of A.
    window: int = DEFAULT_WINDOW


def candidate_pool(A: RSet, window: int = DEFAULT_WINDOW) -> List[Fraction]:
    """Elements not in A offered to replace/add moves."""
    pool = {Fraction(x) for x in range(1, window + 1)}
    for a in A:
        pool.update({2 * a, 3 * a})
        if a.denominator == 1 and a > 0:
            n = a.numerator
            pool.update(Fraction(d) for d in range(1, n + 1) if n % d == 0)
    return sorted(x for x in pool if x not in A.members)


def neighbors(A: RSet, rules: MoveRules = MoveRules()) -> List[RSet]:
    """All nonempty sets one enabled move away from A, deduplicated and sorted by (size, elements)."""
    if not A:
        raise DomainError("neighbors need a nonempty set")
    found = set()
    remove = rules.remove and not rules.preserve_cardinality
    add = rules.add and not rules.preserve_cardinality
    if remove and len(A) > 1:
        for a in A:
            found.add(RSet(tuple(x for x in A if x != a)))
    if rules.replace or add:
        pool = candidate_pool(A, rules.window)
        if rules.replace:
            for a in A:
                rest = [x for x in A if x != a]
                for c in pool:
                    found.add(rset_from(rest + [c]))
        if add:
            for c in pool:
                found.add(rset_from(list(A) + [c]))
    if rules.respace and len(A) > 1:
        # Each pair a < b fixes the progression a, b, 2b - a, ...
        for i, a in enumerate(A.elements):
            for b in A.elements[i + 1 :]:
                B = _progression(len(A), a, b - a)
                if B != A:
                    found.add(B)
    return sorted(found, key=lambda B: (len(B), B.elements))
