import random
from math import lcm

import pytest

from eudoxus import indexset
from eudoxus.indexset import (
    IndexSet,
    IndexSetSyntaxError,
    complement,
    empty,
    evens,
    format_set,
    full,
    intersect,
    multiples,
    odds,
    parse,
    singleton,
    union,
)


def test_membership_examples():
    assert evens().member(4)
    assert not evens().member(5)
    assert IndexSet("00000", "1").is_cofinite()
    assert evens().is_infinite() and not evens().is_cofinite()
    assert IndexSet("101", "0").is_finite()


def test_set_algebra_examples():
    assert intersect(evens(), complement(evens())) == empty()
    assert intersect(evens(), multiples(3)) == multiples(6)
    sixes = intersect(evens(), multiples(3))
    assert len(sixes.period) == 6 and sixes.period.count("1") == 1


def test_canonical_form_is_minimal_and_unique():
    assert IndexSet("", "1010") == evens()
    assert IndexSet("10", "10") == evens()
    assert IndexSet("0", "0101").pre == ""
    assert IndexSet("0", "0101").period == "01"
    s = IndexSet("0110", "110110")
    again = IndexSet(s.pre, s.period)
    assert (again.pre, again.period) == (s.pre, s.period)


def test_members_if_finite():
    assert IndexSet("101", "0").members_if_finite() == [0, 2]
    with pytest.raises(ValueError):
        evens().members_if_finite()


def test_parse_format_examples():
    assert parse("pre:;per:10") == evens()
    assert parse("pre:00000;per:1") == IndexSet("00000", "1")
    assert format_set(parse("pre:;per:1010")) == "pre:;per:10"
    with pytest.raises(IndexSetSyntaxError):
        parse("pre:;per:")


def test_parse_errors_carry_offsets():
    with pytest.raises(IndexSetSyntaxError) as exc:
        parse("per:10")
    assert exc.value.offset == 0
    with pytest.raises(IndexSetSyntaxError) as exc:
        parse("pre:01;px:1")
    assert exc.value.offset == 6
    with pytest.raises(IndexSetSyntaxError) as exc:
        parse("pre:;per:10x")
    assert exc.value.offset == 11


def _sample(rng: random.Random) -> IndexSet:
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 6)))
    per = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
    return IndexSet(pre, per)


def test_boolean_algebra_laws_hold_exactly():
    rng = random.Random(2718)
    for _ in range(10_000):
        s, t = _sample(rng), _sample(rng)
        assert complement(union(s, t)) == intersect(complement(s), complement(t))
        assert complement(intersect(s, t)) == union(complement(s), complement(t))
        assert complement(complement(s)) == s
        u = _sample(rng)
        assert intersect(s, union(t, u)) == union(intersect(s, t), intersect(s, u))


def test_operations_match_pointwise_semantics():
    rng = random.Random(2719)
    for _ in range(2000):
        s, t = _sample(rng), _sample(rng)
        window = max(len(s.pre), len(t.pre)) + 4 * lcm(len(s.period), len(t.period))
        for n in range(window):
            assert union(s, t).member(n) == (s.member(n) or t.member(n))
            assert intersect(s, t).member(n) == (s.member(n) and t.member(n))
            assert complement(s).member(n) == (not s.member(n))


def test_equality_iff_pointwise_agreement():
    rng = random.Random(2720)
    for _ in range(2000):
        s, t = _sample(rng), _sample(rng)
        window = (
            max(len(s.pre), len(t.pre))
            + 2 * lcm(len(s.period), len(t.period))
        )
        agree = all(s.member(n) == t.member(n) for n in range(window))
        assert agree == (s == t)


def test_classification_predicates():
    assert full().is_cofinite()
    assert empty().is_finite()
    assert singleton(5).is_finite()
    assert complement(singleton(5)).is_cofinite()
    assert odds().is_infinite()
    assert not odds().is_cofinite()
