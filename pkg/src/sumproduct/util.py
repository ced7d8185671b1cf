#!/usr/bin/env python3

"""
This file contains various utility functions, which are needed in several otherwise unrelated modules.
Currently, this contains the following
- a function to parse set files (with error handling),
- a function to format a |relativedelta|, used for reporting how long a phase took
- a stable content hash of JSON-like data
"""

import hashlib
import json
import sys
from typing import Iterable

from dateutil import relativedelta

from sumproduct.core import ParseError, RSet, rational_parse, rset_from


def eprint(val):
    print(val, file=sys.stderr)


# Parse the set file |name|: one element per line, each line an integer or "p/q";
# blank lines and lines starting with "#" are ignored.
# Return the parsed set if successful, and an error message describing what went wrong otherwise.
def parse_set_file(name: str) -> RSet | str:
    try:
        with open(name, "r", encoding="utf-8") as fi:
            lines = fi.readlines()
    except OSError as err:
        return f"error: cannot read set file {name}: {err.strerror}"
    return parse_set_text(lines, name)


def parse_set_text(lines: Iterable[str], name: str = "<input>") -> RSet | str:
    values = []
    for number, line in enumerate(lines, start=1):
        content = line.strip()
        if not content or content.startswith("#"):
            continue
        try:
            values.append(rational_parse(content))
        except (ParseError, ZeroDivisionError) as err:
            return f"error: {name}, line {number}: {err}"
    return rset_from(values)


def format_delta(delta: relativedelta.relativedelta) -> str:
    def pluralize(n: int, s: str) -> str:
        return f"{n} {s}" if n == 1 else f"{n} {s}s"

    if delta.days > 0:
        return pluralize(delta.days, "day")
    elif delta.hours > 0:
        return pluralize(delta.hours, "hour")
    elif delta.minutes > 0:
        return f"{pluralize(delta.minutes, 'minute')} {pluralize(delta.seconds, 'second')}"
    elif delta.seconds > 0:
        return pluralize(delta.seconds, "second")
    else:
        return f"{delta.microseconds // 1000} ms"


# Turn a duration in (fractional) seconds into a normalised |relativedelta|.
def seconds_to_delta(seconds: float) -> relativedelta.relativedelta:
    return relativedelta.relativedelta(microseconds=int(seconds * 1_000_000)).normalized()


# A short content hash of JSON-serialisable data; keys are sorted so the hash is stable.
def stable_digest(data) -> str:
    raw = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]
