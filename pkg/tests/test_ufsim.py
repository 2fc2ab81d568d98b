import random

import pytest

from eudoxus import indexset, ufsim
from eudoxus.indexset import IndexSet, evens, multiples, odds, singleton, union
from eudoxus.ufsim import (
    Containment,
    TraceError,
    Verdict,
    contains,
    export_trace,
    fresh_state,
    import_trace,
    query,
    replay,
)


def _session():
    state = fresh_state()
    v1, state = query(state, evens())
    v2, state = query(state, odds())
    v3, state = query(state, multiples(4))
    return (v1, v2, v3), state


def test_query_examples():
    (v1, v2, v3), state = _session()
    assert v1 is Verdict.ACCEPTED
    assert v2 is Verdict.REJECTED
    assert v3 is Verdict.ACCEPTED
    assert state.meet == multiples(4)


def test_query_is_idempotent():
    _, state = _session()
    verdict, after = query(state, evens())
    assert verdict is Verdict.ACCEPTED
    assert after == state


def test_contains_examples():
    state = fresh_state()
    _, state = query(state, evens())
    assert contains(state, union(evens(), singleton(3))) is Containment.FORCED_IN
    assert contains(state, odds()) is Containment.FORCED_OUT
    assert contains(fresh_state(), evens()) is Containment.UNDECIDED


def test_contains_does_not_mutate():
    _, state = _session()
    before = state
    contains(state, odds())
    assert state == before


def test_replay_and_trace_round_trip():
    _, state = _session()
    text = export_trace(state)
    assert import_trace(text) == state
    assert replay([]) == fresh_state()
    assert replay(list(state.log)) == state


def test_tampered_trace_rejected():
    text = "Accepted pre:;per:10\nAccepted pre:;per:01\n"
    with pytest.raises(TraceError) as exc:
        import_trace(text)
    assert exc.value.line == 2


def test_malformed_trace_diagnostics():
    with pytest.raises(TraceError) as exc:
        import_trace("Accepted\n")
    assert exc.value.line == 1
    with pytest.raises(TraceError) as exc:
        import_trace("Accepted pre:;per:10\nMaybe pre:;per:01\n")
    assert exc.value.line == 2
    with pytest.raises(TraceError) as exc:
        import_trace("Accepted pre:;per:\n")
    assert exc.value.line == 1


def _sample(rng: random.Random) -> IndexSet:
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 5)))
    per = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
    return IndexSet(pre, per)


def test_fip_and_forced_verdicts_over_random_queries():
    rng = random.Random(66)
    state = fresh_state()
    for _ in range(2000):
        s = _sample(rng)
        verdict, state = query(state, s)
        assert state.meet.is_infinite()
        if s.is_cofinite():
            assert verdict is Verdict.ACCEPTED
        if s.is_finite():
            assert verdict is Verdict.REJECTED


def test_ultra_property_on_queried_sets():
    rng = random.Random(67)
    state = fresh_state()
    queried = []
    for _ in range(200):
        s = _sample(rng)
        _, state = query(state, s)
        queried.append(s)
    for s in queried:
        inside = contains(state, s) is Containment.FORCED_IN
        outside = contains(state, indexset.complement(s)) is Containment.FORCED_IN
        assert inside != outside


def test_monotone_consistency():
    rng = random.Random(68)
    state = fresh_state()
    _, state = query(state, evens())
    assert contains(state, evens()) is Containment.FORCED_IN
    for _ in range(300):
        _, state = query(state, _sample(rng))
        assert contains(state, evens()) is Containment.FORCED_IN


def test_non_principality():
    rng = random.Random(69)
    state = fresh_state()
    for _ in range(50):
        _, state = query(state, _sample(rng))
    for n in (0, 1, 17, 100):
        verdict, state = query(state, singleton(n))
        assert verdict is Verdict.REJECTED


def test_replay_reproduces_state_deterministically():
    rng = random.Random(70)
    state = fresh_state()
    for _ in range(500):
        _, state = query(state, _sample(rng))
    assert replay([entry for entry in state.log]) == state
    assert export_trace(import_trace(export_trace(state))) == export_trace(state)
