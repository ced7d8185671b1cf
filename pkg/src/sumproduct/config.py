"""
Tunables of the laboratory: caps and budgets of the exhaustive computations,
the digit budget of non-exact values and the default corpus.

Every field has a module-level default; a JSON configuration file may override any subset of them.
"""

import json
from os import path
from typing import List, NamedTuple

from sumproduct.core import DEFAULT_PRECISION, ParseError

# Exhaustive magnification-ratio searches enumerate 2^|A| - 1 subsets.
DEFAULT_MAGNIFICATION_CAP = 18
# Subsets of A of at most this size are part of the default candidate family for d(A).
DEFAULT_D_SUBSET_CAP = 2
# Largest number of pairs a single set operation inside the ledger may enumerate.
DEFAULT_PAIR_BUDGET = 4_000_000
# Frozen calibration threshold for count·τ²/(|A+A||B+B|).
DEFAULT_TAU_CALIBRATION = 16
# Integer window [1, window] offered to the local search as candidate elements.
DEFAULT_WINDOW = 32

# Used when no corpus file is given and `default-corpus.json` is absent.
BUILTIN_CORPUS = [
    "AP,8,1,1",
    "AP,16,1,1",
    "AP,24,1,1",
    "GP,8,1,2",
    "GP,16,1,2",
    "GP,24,1,2",
    "random_int,8,low=1,high=100,seed=1",
    "random_int,12,low=1,high=200,seed=2",
    "random_int,16,low=1,high=400,seed=3",
    "random_int,24,low=1,high=1000,seed=4",
    "union_AP_GP,12,1,1,ratio=2",
    "perturb,12,edits=2,seed=5",
]
DEFAULT_CORPUS_FILE = "default-corpus.json"


class LabConfig(NamedTuple):
    magnification_cap: int = DEFAULT_MAGNIFICATION_CAP
    energy_precision: int = DEFAULT_PRECISION
    d_subset_cap: int = DEFAULT_D_SUBSET_CAP
    pair_budget: int = DEFAULT_PAIR_BUDGET
    tau_calibration: int = DEFAULT_TAU_CALIBRATION
    window: int = DEFAULT_WINDOW
    # Number of worker processes for suite runs and search restarts.
    jobs: int = 1


# Read a configuration file; any key not mentioned keeps its default.
def read_lab_config(name: str) -> LabConfig:
    with open(name, "r") as fi:
        try:
            entries = json.load(fi)
        except json.decoder.JSONDecodeError as err:
            raise ParseError(f"the configuration file {name} is invalid JSON: {err}")
    if not isinstance(entries, dict):
        raise ParseError(f"the configuration file {name} must contain a JSON object")
    unknown = sorted(set(entries) - set(LabConfig._fields))
    if unknown:
        raise ParseError(f"the configuration file {name} has unknown keys {unknown}")
    # isinstance(True, int) holds.
    invalid = sorted(key for key, value in entries.items() if not isinstance(value, int) or isinstance(value, bool))
    if invalid:
        raise ParseError(f"the configuration file {name} needs integer values for {invalid}")
    config = LabConfig(**entries)
    if config.energy_precision < 15:
        raise ParseError(f"energy_precision must be at least 15, got {config.energy_precision}")
    if config.jobs < 1:
        raise ParseError(f"jobs must be at least 1, got {config.jobs}")
    return config


# The default corpus: the family specs listed in |name| if that file exists, the built-in list otherwise.
def read_corpus_specs(name: str = DEFAULT_CORPUS_FILE) -> List[str]:
    if not path.exists(name):
        return list(BUILTIN_CORPUS)
    with open(name, "r") as fi:
        try:
            specs = json.load(fi)
        except json.decoder.JSONDecodeError as err:
            raise ParseError(f"the corpus file {name} is invalid JSON: {err}")
    if not isinstance(specs, list) or not all(isinstance(spec, str) for spec in specs):
        raise ParseError(f"the corpus file {name} must contain a list of family spec strings")
    return specs
