import random

import pytest

from eudoxus import ahom
from eudoxus.ahom import (
    CertificateError,
    Compose,
    FloorLinear,
    FloorSqrt,
    IntScale,
    Neg,
    RuleSyntaxError,
    Sum,
    discrepancy,
    eval_range,
    format_rule,
    parse_rule,
    set_cache_limit,
    verify_bound,
)

from oracles import bisect_isqrt


# -- evaluation ----------------------------------------------------------------


def test_floor_linear_eval():
    assert FloorLinear(1, 2).eval(7) == 3


def test_floor_sqrt_eval_matches_isqrt_oracle():
    assert FloorSqrt(2).eval(10) == bisect_isqrt(200) == 14


def test_compose_eval_matches_oracle():
    f = Compose(FloorSqrt(2), FloorSqrt(2))
    inner = bisect_isqrt(200)
    assert f.eval(10) == bisect_isqrt(2 * inner * inner) == 19


def test_floor_is_toward_minus_infinity():
    assert FloorLinear(1, 2).eval(-7) == -4
    assert FloorLinear(-1, 2).eval(7) == -4


def test_eval_deterministic_and_cache_transparent():
    f = Compose(FloorSqrt(3), FloorLinear(7, 5))
    baseline = [f.eval(a) for a in range(-50, 51)]
    assert [f.eval(a) for a in range(-50, 51)] == baseline
    set_cache_limit(4)
    try:
        g = Compose(FloorSqrt(3), FloorLinear(7, 5))
        assert [g.eval(a) for a in range(-50, 51)] == baseline
    finally:
        set_cache_limit(None)


def test_eval_range_agrees_with_pointwise():
    nodes = [
        FloorLinear(-7, 3),
        FloorSqrt(5),
        Sum(FloorSqrt(2), Neg(FloorLinear(1, 3))),
        IntScale(-3, FloorSqrt(7)),
        Compose(FloorLinear(2, 3), FloorSqrt(2)),
    ]
    for f in nodes:
        window = list(range(-40, 41))
        assert eval_range(f, window) == [f.eval(a) for a in window]


# -- discrepancy and certificates ------------------------------------------------


def test_discrepancy_examples():
    assert discrepancy(FloorLinear(1, 2), 3, 5) == 1
    assert discrepancy(FloorLinear(1, 2), 2, 4) == 0
    assert discrepancy(FloorSqrt(2), 10, 10) == bisect_isqrt(800) - 2 * bisect_isqrt(200) == 0


def test_discrepancy_aborts_on_certificate_violation():
    f = Compose(FloorSqrt(2), FloorSqrt(2))
    f.__dict__["bound"] = 0  # corrupt the cached certificate
    with pytest.raises(CertificateError):
        for p in range(-5, 6):
            for q in range(-5, 6):
                discrepancy(f, p, q)


def test_verify_bound_examples():
    report = verify_bound(FloorLinear(1, 2), 100)
    assert report.ok and report.max_abs_discrepancy == 1
    assert verify_bound(Sum(FloorLinear(1, 2), FloorLinear(1, 2)), 50).ok
    assert verify_bound(FloorSqrt(2), 100).ok


def test_bound_propagation_rules():
    f, g = FloorLinear(1, 2), FloorLinear(1, 3)
    assert Sum(f, f).bound == 2
    assert Neg(f).bound == f.bound
    assert IntScale(-4, g).bound == 4 * g.bound
    c = Compose(FloorSqrt(2), FloorSqrt(2))
    peak = max(abs(FloorSqrt(2).eval(e)) for e in range(-2, 3))
    assert c.bound == 2 * 2 + peak


def test_certificate_soundness_random_constructions():
    rng = random.Random(1105)
    nodes = []
    for _ in range(3):
        nodes.append(FloorLinear(rng.randint(-20, 20), rng.randint(1, 20)))
        nodes.append(FloorSqrt(rng.randint(0, 20)))
    nodes.append(Sum(nodes[0], nodes[1]))
    nodes.append(Neg(nodes[2]))
    nodes.append(IntScale(rng.randint(-20, 20), nodes[3]))
    nodes.append(Compose(nodes[1], nodes[0]))
    nodes.append(Compose(nodes[0], nodes[1]))
    for f in nodes:
        assert verify_bound(f, 200).ok, format_rule(f)


def test_floor_sum_identity_for_positive_slopes():
    rng = random.Random(7)
    for _ in range(10):
        f = FloorLinear(rng.randint(1, 30), rng.randint(1, 30))
        vals = eval_range(f, range(-60, 61))
        for p in range(-30, 31):
            for q in range(-30, 31):
                d = vals[60 + p + q] - vals[60 + p] - vals[60 + q]
                assert d in (0, 1)


def test_floor_sqrt_odd_symmetry():
    f = FloorSqrt(2)
    for a in range(-200, 201):
        assert f.eval(-a) == -f.eval(a)


# -- pointwise algebra -----------------------------------------------------------


def test_add_examples():
    s = Sum(FloorLinear(1, 2), FloorLinear(1, 3))
    assert s.eval(6) == 5
    f = FloorSqrt(2)
    cancel = Sum(f, Neg(f))
    assert all(cancel.eval(a) == 0 for a in range(-100, 101))


def test_neg_examples():
    assert Neg(FloorLinear(1, 2)).eval(7) == -3
    f = FloorSqrt(2)
    assert Neg(Neg(f)).eval(10) == f.eval(10) == 14
    assert Neg(FloorSqrt(2)).eval(10) == -14


def test_compose_examples():
    c = Compose(FloorLinear(1, 2), FloorLinear(1, 3))
    assert c.eval(12) == 2
    assert Compose(FloorSqrt(2), FloorSqrt(2)).eval(10) == 19


def test_compose_commutes_modulo_bounded():
    f, g = FloorSqrt(2), FloorLinear(1, 3)
    fg, gf = Compose(f, g), Compose(g, f)
    tol = fg.bound + gf.bound
    window = range(-1000, 1001)
    for a, b in zip(eval_range(fg, window), eval_range(gf, window)):
        assert abs(a - b) <= tol


# -- serialization ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    [
        "linear(1/2)",
        "linear(-22/7)",
        "sqrt(2)",
        "sum(linear(1/2),sqrt(3))",
        "neg(sqrt(5))",
        "scale(-4,linear(2/3))",
        "compose(sqrt(2),linear(1/3))",
    ],
)
def test_rule_text_round_trip(text):
    node = parse_rule(text)
    assert format_rule(node) == text
    assert parse_rule(format_rule(node)) == node


def test_parse_rule_rejects_malformed():
    with pytest.raises(RuleSyntaxError) as exc:
        parse_rule("linear(1/2")
    assert exc.value.offset == 10
    with pytest.raises(RuleSyntaxError):
        parse_rule("mystery(1)")
    with pytest.raises(RuleSyntaxError):
        parse_rule("sqrt(2)x")


def test_invert_round_trip():
    from eudoxus.reals import from_rational

    inv = from_rational(3, 2).recip(1 << 20).rep
    assert parse_rule(format_rule(inv)) == inv
