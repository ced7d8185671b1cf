#!/usr/bin/env python3

"""
Unit tests for the local search in `search.py`.
"""

from decimal import Decimal
from fractions import Fraction

import pytest

from sumproduct.core import DomainError, rset_from, to_decimal
from sumproduct.generators import MoveRules, parse_family_spec
from sumproduct.search import Objective, Quantity, local_search, quantity_value, score
from sumproduct.setops import sumset


def test_score() -> None:
    def check(elements, objective: Objective, expected: str) -> None:
        actual = score(rset_from(elements), objective)
        assert actual == Decimal(expected), f"expected {objective} of {elements} to be {expected}, got {actual}"

    check([1, 2, 4, 8], Objective(Quantity.ProductPlusSet, Fraction(3, 2)), "2.75")
    check([1, 2, 3, 4], Objective(Quantity.Sumset, Fraction(1)), "1.75")
    check([5], Objective(Quantity.RatioPlusRatio, Fraction(1)), "1")
    assert quantity_value(rset_from([1, 2]), Quantity.ProductPlusProduct) == 6
    assert quantity_value(rset_from([1, 2]), Quantity.RatioPlusSet) == 5

    with pytest.raises(DomainError):
        score(rset_from([0, 1]), Objective(Quantity.RatioPlusSet, Fraction(1)))
    with pytest.raises(DomainError):
        score(rset_from([1, 2]), Objective(Quantity.Sumset, Fraction(0)))
    assert Quantity.from_string("A:A+A:A") == Quantity.RatioPlusRatio


def test_budget() -> None:
    objective = Objective(Quantity.ProductPlusSet, Fraction(3, 2))
    result = local_search(objective, parse_family_spec("GP,4,1,2"), budget=1)
    assert result.best_set == rset_from([1, 2, 4, 8]), "budget 1 only scores the initial set"
    assert result.trace == [(0, Decimal("2.75"))]
    assert result.evaluated == 1
    with pytest.raises(DomainError):
        local_search(objective, parse_family_spec("GP,4,1,2"), budget=0)
    with pytest.raises(DomainError):
        local_search(Objective(Quantity.RatioPlusSet, Fraction(1)), parse_family_spec("AP,4,0,1"), budget=10)


def test_descent() -> None:
    objective = Objective(Quantity.ProductPlusSet, Fraction(3, 2))
    result = local_search(objective, parse_family_spec("GP,6,1,2"), budget=80, restarts=2, seed=3)
    scores = [value for _, value in result.trace]
    assert all(later < earlier for earlier, later in zip(scores, scores[1:])), f"the trace must strictly decrease: {scores}"
    assert result.best_score == scores[-1]
    assert result.best_score <= score(rset_from([1, 2, 4, 8, 16, 32]), objective)
    assert result.best_score == score(result.best_set, objective)
    assert result.restart in (0, 1)


def test_perturbed_progression_returns_to_a_progression() -> None:
    # One replaced element: putting the missing element back gives |A+A| = 2|A| - 1, the minimum.
    objective = Objective(Quantity.Sumset, Fraction(1))
    rules = MoveRules(preserve_cardinality=True)
    result = local_search(objective, parse_family_spec("perturb,6,edits=1,seed=4"), budget=2000, rules=rules)
    assert result.best_score == to_decimal(Fraction(11, 6)), f"expected 11/6, got {result.best_score}"
    best = result.best_set.elements
    assert len(sumset(result.best_set, result.best_set)) == 11
    assert len({y - x for x, y in zip(best, best[1:])}) == 1, f"{result.best_set} is not an arithmetic progression"


def _is_progression(A) -> bool:
    return len({y - x for x, y in zip(A.elements, A.elements[1:])}) <= 1


def test_random_start_reaches_a_progression() -> None:
    # |A+A| = 2|A| - 1 only for arithmetic progressions, and every set has one a respacing away.
    objective = Objective(Quantity.Sumset, Fraction(1))
    for seed in [1, 2, 3, 4, 5, 9, 10]:
        init = parse_family_spec(f"random_int,6,1,30,seed={seed}")
        result = local_search(objective, init, budget=5000)
        assert result.best_score == to_decimal(Fraction(11, 6)), f"seed {seed}: expected 11/6, got {result.best_score}"
        assert len(result.best_set) == 6 and _is_progression(result.best_set), f"seed {seed}: {result.best_set} is not a progression"


def test_default_rules_keep_cardinality() -> None:
    kept = local_search(Objective(Quantity.ProductPlusSet, Fraction(3, 2)), parse_family_spec("GP,8,1,2"), budget=300)
    assert len(kept.best_set) == 8, f"the default rules must keep |A|, got {kept.best_set}"

    # An arithmetic progression is optimal for |A+A|/|A| at its size; only removals improve on it.
    objective = Objective(Quantity.Sumset, Fraction(1))
    progression = local_search(objective, parse_family_spec("AP,8"), budget=300)
    assert progression.best_set == rset_from(range(1, 9)) and progression.trace == [(0, to_decimal(Fraction(15, 8)))]
    resized = local_search(objective, parse_family_spec("AP,8"), budget=300, rules=MoveRules(preserve_cardinality=False))
    assert len(resized.best_set) < 8 and resized.best_score < progression.best_score, f"unexpected {resized.best_set}"


def test_determinism() -> None:
    objective = Objective(Quantity.RatioPlusSet, Fraction(3, 2))
    init = parse_family_spec("random_int,6,1,30,seed=9")
    first = local_search(objective, init, budget=40, restarts=3, seed=11)
    second = local_search(objective, init, budget=40, restarts=3, seed=11)
    assert first == second, "the same seed must give the same search"
    parallel = local_search(objective, init, budget=40, restarts=3, seed=11, jobs=2)
    assert parallel == first, "the number of worker processes must not change the result"
    other = local_search(objective, init, budget=40, restarts=3, seed=12)
    assert other.config_digest != first.config_digest


if __name__ == "__main__":
    test_score()
    test_budget()
    test_descent()
    test_perturbed_progression_returns_to_a_progression()
    test_random_start_reaches_a_progression()
    test_default_rules_keep_cardinality()
    test_determinism()
