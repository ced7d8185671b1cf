"""
Local search for sets with few sums of products: steepest descent over |generators.neighbors|
with seeded restarts, minimising a growth quantity normalised by a power of |A|.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from enum import StrEnum, unique
from fractions import Fraction
from typing import Dict, List, NamedTuple, Tuple

from sumproduct.core import DEFAULT_PRECISION, DomainError, RSet, decimal_power, to_decimal
from sumproduct.generators import FamilySpec, MoveRules, generate, neighbors
from sumproduct.setops import product_set, ratio_set, sumset
from sumproduct.util import stable_digest

logger = logging.getLogger(__name__)

# Number of random moves applied to the initial set before a restart (other than the first) descends.
RESTART_KICKS = 3


@unique
class Quantity(StrEnum):
    ProductPlusSet = "AA+A"
    RatioPlusSet = "A:A+A"
    ProductPlusProduct = "AA+AA"
    RatioPlusRatio = "A:A+A:A"
    Sumset = "A+A"

    @staticmethod
    def from_string(s: str):
        return {
            "AA+A": Quantity.ProductPlusSet,
            "A:A+A": Quantity.RatioPlusSet,
            "AA+AA": Quantity.ProductPlusProduct,
            "A:A+A:A": Quantity.RatioPlusRatio,
            "A+A": Quantity.Sumset,
        }[s]

    def needs_nonzero(self) -> bool:
        return self in (Quantity.RatioPlusSet, Quantity.RatioPlusRatio)


class Objective(NamedTuple):
    quantity: Quantity
    # The score is quantity / |A|^exponent; always minimised.
    exponent: Fraction

    def __str__(self) -> str:
        return f"|{self.quantity}|/|A|^{self.exponent}"


def quantity_value(A: RSet, quantity: Quantity) -> int:
    if quantity.needs_nonzero() and A.has_zero():
        raise DomainError(f"{quantity} needs 0 ∉ A, got {A}")
    match quantity:
        case Quantity.ProductPlusSet:
            return len(sumset(product_set(A, A), A))
        case Quantity.RatioPlusSet:
            return len(sumset(ratio_set(A, A), A))
        case Quantity.ProductPlusProduct:
            D = product_set(A, A)
            return len(sumset(D, D))
        case Quantity.RatioPlusRatio:
            D = ratio_set(A, A)
            return len(sumset(D, D))
        case Quantity.Sumset:
            return len(sumset(A, A))
    raise DomainError(f"unknown quantity {quantity}")


def score(A: RSet, objective: Objective, precision: int = DEFAULT_PRECISION) -> Decimal:
    if objective.exponent <= 0:
        raise DomainError(f"the normalisation exponent must be positive, got {objective.exponent}")
    if not A:
        raise DomainError("cannot score the empty set")
    value = quantity_value(A, objective.quantity)
    exponent = Fraction(objective.exponent)
    if exponent.denominator == 1:
        return to_decimal(Fraction(value, len(A) ** exponent.numerator), precision)
    return to_decimal(Decimal(value) / decimal_power(len(A), exponent, precision + 10), precision)


def _feasible(A: RSet, objective: Objective) -> bool:
    return not (objective.quantity.needs_nonzero() and A.has_zero())


class SearchResult(NamedTuple):
    best_set: RSet
    best_score: Decimal
    # (step, score) of every accepted state of the winning restart, the start included.
    trace: List[Tuple[int, Decimal]]
    config_digest: str
    # The restart that found |best_set| and the number of sets scored across all restarts.
    restart: int
    evaluated: int


class _RestartTask(NamedTuple):
    objective: Objective
    init: RSet
    rules: MoveRules
    budget: int
    seed: int
    restart: int
    precision: int


class _RestartResult(NamedTuple):
    best_set: RSet
    best_score: Decimal
    trace: List[Tuple[int, Decimal]]
    evaluated: int


def _restart_start(task: _RestartTask) -> RSet:
    if task.restart == 0:
        return task.init
    # A string seed is hashed with SHA-512 by |random.Random|, independent of PYTHONHASHSEED.
    rng = random.Random(f"{task.seed}/{task.restart}")
    current = task.init
    for _ in range(RESTART_KICKS):
        options = [B for B in neighbors(current, task.rules) if _feasible(B, task.objective)]
        if not options:
            break
        current = options[rng.randrange(len(options))]
    return current


def _descend(task: _RestartTask) -> _RestartResult:
    cache: Dict[RSet, Decimal] = {}

    def evaluate(A: RSet) -> Decimal:
        if A not in cache:
            cache[A] = score(A, task.objective, task.precision)
        return cache[A]

    current = _restart_start(task)
    current_score = evaluate(current)
    trace = [(0, current_score)]
    step = 0
    while len(cache) < task.budget:
        best_next = None
        for B in neighbors(current, task.rules):
            if len(cache) >= task.budget and B not in cache:
                break
            if not _feasible(B, task.objective):
                continue
            candidate = evaluate(B)
            if candidate < current_score and (best_next is None or candidate < best_next[0]):
                best_next = (candidate, B)
        if best_next is None:
            break
        step += 1
        current_score, current = best_next
        trace.append((step, current_score))
        logger.debug("restart %d, step %d: %s scores %s", task.restart, step, current, current_score)
    return _RestartResult(current, current_score, trace, len(cache))


def local_search(
    objective: Objective,
    init: FamilySpec,
    budget: int,
    restarts: int = 1,
    seed: int = 0,
    rules: MoveRules = MoveRules(),
    jobs: int = 1,
    precision: int = DEFAULT_PRECISION,
) -> SearchResult:
    """Steepest descent from the set |init| describes, plus |restarts| - 1 restarts from randomly moved copies of it.
    |budget| bounds the number of distinct sets scored per restart; budget 1 only scores the start."""
    if budget < 1:
        raise DomainError(f"the search budget must be at least 1, got {budget}")
    if restarts < 1:
        raise DomainError(f"at least one restart is needed, got {restarts}")
    start = generate(init)
    if not _feasible(start, objective):
        raise DomainError(f"the initial set {start} is infeasible for {objective}")
    # Validates the objective before any worker starts.
    score(start, objective, precision)
    tasks = [_RestartTask(objective, start, rules, budget, seed, r, precision) for r in range(restarts)]
    if jobs > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_descend, tasks))
    else:
        results = [_descend(task) for task in tasks]
    winner = min(range(restarts), key=lambda r: (results[r].best_score, len(results[r].best_set), results[r].best_set.elements, r))
    best = results[winner]
    digest = stable_digest(
        {
            "objective": [str(objective.quantity), str(objective.exponent)],
            "init": str(init),
            "budget": budget,
            "restarts": restarts,
            "seed": seed,
            "rules": list(rules),
        }
    )
    logger.info("search: best %s with score %s (restart %d)", best.best_set, best.best_score, winner)
    return SearchResult(best.best_set, best.best_score, best.trace, digest, winner, sum(r.evaluated for r in results))
