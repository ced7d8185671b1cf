#!/usr/bin/env python3

"""
Unit tests for the set families and the neighbourhood moves in `generators.py`.
"""

from fractions import Fraction

import pytest

from sumproduct.core import InfeasibleError, ParseError, rset_from
from sumproduct.generators import (
    FamilyKind,
    MoveRules,
    candidate_pool,
    generate,
    neighbors,
    parse_family_spec,
)
from sumproduct.setops import product_set, sumset


def _gen(text: str):
    return generate(parse_family_spec(text))


def test_parse_family_spec() -> None:
    spec = parse_family_spec("AP,10,1,3")
    assert spec.kind == FamilyKind.AP
    assert spec.parameters == {"n": "10", "start": "1", "step": "3"}
    assert parse_family_spec("random,8,low=1,high=50,seed=7").kind == FamilyKind.RandomInt
    assert parse_family_spec("GP,5").parameters == {"n": "5", "start": "1", "ratio": "2"}
    for text in ["AP,10,1,3", "random_int,8,1,50,seed=7", "union_AP_GP,6,1,1,ratio=3", "perturb,6,edits=2"]:
        spec = parse_family_spec(text)
        assert parse_family_spec(str(spec)) == spec, f"{text} does not survive printing as {spec}"

    for bad in ["", "XP,3", "AP,1,2,3,4", "AP,x", "interval,1"]:
        with pytest.raises(ParseError):
            parse_family_spec(bad)
    for infeasible in ["AP,0", "AP,5,1,0", "GP,5,1,1", "GP,5,1,-1", "GP,5,0,2", "union_AP_GP,4,ratio=0"]:
        with pytest.raises(InfeasibleError):
            parse_family_spec(infeasible)


def test_generate() -> None:
    def check(text: str, expected) -> None:
        actual = _gen(text)
        assert actual == rset_from(expected), f"expected {text} to generate {rset_from(expected)}, got {actual}"

    check("AP,5", [1, 2, 3, 4, 5])
    check("AP,10,1,3", [1, 4, 7, 10, 13, 16, 19, 22, 25, 28])
    check("AP,3,1/2,1/2", [Fraction(1, 2), 1, Fraction(3, 2)])
    check("GP,4,1,2", [1, 2, 4, 8])
    check("GP,3,3,1/3", [Fraction(1, 3), 1, 3])
    check("interval,-2,2", [-2, -1, 0, 1, 2])
    check("union_AP_GP,6,1,1,ratio=2", [1, 2, 3, 4, 8, 16])
    check("union_AP_GP,12,1,1,ratio=2", [1, 2, 3, 4, 5, 6, 8, 16, 32, 64, 128, 256])
    check("union_AP_GP,5,2,2,ratio=-2", [-4, 2, 4, 6, 8])
    for n in range(1, 30):
        for text in (f"union_AP_GP,{n},1,1,ratio=2", f"union_AP_GP,{n},3,3,ratio=3", f"perturb,{n},edits=0"):
            assert len(_gen(text)) == n, f"{text} must generate {n} elements, got {_gen(text)}"
    with pytest.raises(InfeasibleError):
        _gen("interval,3,1")

    first = _gen("random_int,8,1,100,seed=42")
    assert first == _gen("random_int,8,1,100,seed=42"), "the same seed must give the same set"
    assert len(first) == 8 and all(1 <= x <= 100 for x in first)
    assert first != _gen("random_int,8,1,100,seed=43")
    assert _gen("random_int,5,1,5") == rset_from(range(1, 6))
    with pytest.raises(InfeasibleError):
        _gen("random_int,6,1,5")

    perturbed = _gen("perturb,10,edits=3,seed=1")
    assert perturbed == _gen("perturb,10,edits=3,seed=1")
    assert len(perturbed) == 10
    assert len(perturbed.members - _gen("AP,10").members) == 3
    assert _gen("perturb,10,edits=0") == _gen("AP,10")


def test_from_file(tmp_path) -> None:
    good = tmp_path / "set.txt"
    good.write_text("# a set\n3\n1/2\n\n3\n", encoding="utf-8")
    assert _gen(f"from_file,{good}") == rset_from([Fraction(1, 2), 3])
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n", encoding="utf-8")
    with pytest.raises(InfeasibleError):
        _gen(f"from_file,{empty}")
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n2.5\n", encoding="utf-8")
    with pytest.raises(ParseError):
        _gen(f"from_file,{bad}")
    with pytest.raises(ParseError):
        _gen(f"from_file,{tmp_path / 'missing.txt'}")


def test_progression_growth() -> None:
    for n in range(1, 13):
        A = _gen(f"AP,{n},1,1")
        G = _gen(f"GP,{n},1,3")
        assert len(sumset(A, A)) == 2 * n - 1, f"|A+A| of an arithmetic progression of length {n}"
        assert len(product_set(G, G)) == 2 * n - 1, f"|GG| of a geometric progression of length {n}"


def test_neighbors() -> None:
    A = rset_from([1, 2])
    only_remove = MoveRules(remove=True, replace=False, add=False, respace=False, preserve_cardinality=False)
    assert neighbors(A, only_remove) == [rset_from([1]), rset_from([2])]
    assert neighbors(rset_from([5]), only_remove) == []
    assert neighbors(A, MoveRules(remove=False, replace=False, add=False, respace=False)) == []
    # A two-element set already is the progression through its pair.
    assert neighbors(A, MoveRules(remove=False, replace=False, add=False)) == []

    pool = candidate_pool(rset_from([6]), window=4)
    assert pool == [Fraction(x) for x in [1, 2, 3, 4, 12, 18]], f"unexpected candidate pool {pool}"

    B = rset_from([2, 3, 5])
    only_respace = neighbors(B, MoveRules(remove=False, replace=False, add=False))
    assert only_respace == [rset_from([2, 3, 4]), rset_from([2, 5, 8]), rset_from([3, 5, 7])], f"got {only_respace}"
    assert neighbors(rset_from([1, 3, 5, 7]), MoveRules(remove=False, replace=False, add=False)) == [
        rset_from([1, 5, 9, 13]),
        rset_from([1, 7, 13, 19]),
        rset_from([3, 5, 7, 9]),
        rset_from([3, 7, 11, 15]),
        rset_from([5, 7, 9, 11]),
    ]

    everything = neighbors(B, MoveRules(preserve_cardinality=False, window=8))
    assert B not in everything
    assert len(set(everything)) == len(everything)
    assert everything == sorted(everything, key=lambda X: (len(X), X.elements))
    assert {len(X) for X in everything} == {2, 3, 4}
    same_size = neighbors(B, MoveRules(window=8))
    assert same_size and all(len(X) == 3 for X in same_size), "the default rules keep |A|"
    assert set(same_size) <= set(everything)
    assert set(only_respace) <= set(same_size)


if __name__ == "__main__":
    test_parse_family_spec()
    test_generate()
    test_progression_growth()
    test_neighbors()
