"""Decidable Boolean algebra of eventually periodic subsets of the naturals.

A set is stored as a finite preperiod bit string plus a repeating period bit
string; membership of n is pre[n] for n < |pre| and period[n mod |period|]
otherwise. Phase is absolute (indexed by n itself, not by n - |pre|), which
keeps alignment of binary operations trivial. Construction always
canonicalizes: minimal period by divisor search, then minimal preperiod by
absorbing trailing bits the period already explains, so equal sets are
structurally identical.

Infinitude and cofiniteness are decidable by inspecting the period, which is
what makes this algebra a usable query universe for the ultrafilter
simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm


class IndexSetSyntaxError(ValueError):
    """Malformed set spec; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class IndexSet:
    pre: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(c not in "01" for c in self.pre + self.period):
            raise ValueError("bits must be 0 or 1")
        pre, period = _canonicalize(self.pre, self.period)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    def member(self, n: int) -> bool:
        if n < 0:
            raise ValueError("indices are natural numbers")
        if n < len(self.pre):
            return self.pre[n] == "1"
        return self.period[n % len(self.period)] == "1"

    def is_infinite(self) -> bool:
        return "1" in self.period

    def is_finite(self) -> bool:
        return not self.is_infinite()

    def is_cofinite(self) -> bool:
        return "0" not in self.period

    def is_empty(self) -> bool:
        return self == empty()

    def members_if_finite(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("set is infinite")
        return [n for n, c in enumerate(self.pre) if c == "1"]

    def __str__(self) -> str:
        return format_set(self)


def _canonicalize(pre: str, period: str) -> tuple[str, str]:
    d = len(period)
    for cand in range(1, d + 1):
        if d % cand == 0 and period == period[:cand] * (d // cand):
            period = period[:cand]
            d = cand
            break
    while pre and pre[-1] == period[(len(pre) - 1) % d]:
        pre = pre[:-1]
    return pre, period


def make(pre: str, period: str) -> IndexSet:
    return IndexSet(pre, period)


def full() -> IndexSet:
    return IndexSet("", "1")


def empty() -> IndexSet:
    return IndexSet("", "0")


def evens() -> IndexSet:
    return IndexSet("", "10")


def odds() -> IndexSet:
    return IndexSet("", "01")


def singleton(n: int) -> IndexSet:
    return IndexSet("0" * n + "1", "0")


def multiples(k: int) -> IndexSet:
    if k < 1:
        raise ValueError("modulus must be positive")
    return IndexSet("", "1" + "0" * (k - 1))


def final_segment(n: int) -> IndexSet:
    """All naturals >= n."""
    return IndexSet("0" * n, "1")


def _binary(s: IndexSet, t: IndexSet, op) -> IndexSet:
    p = max(len(s.pre), len(t.pre))
    ds, dt = len(s.period), len(t.period)
    length = lcm(ds, dt)
    pre = "".join("1" if op(s.member(n), t.member(n)) else "0" for n in range(p))
    per = "".join(
        "1" if op(s.period[m % ds] == "1", t.period[m % dt] == "1") else "0"
        for m in range(length)
    )
    return IndexSet(pre, per)


def union(s: IndexSet, t: IndexSet) -> IndexSet:
    return _binary(s, t, lambda a, b: a or b)


def intersect(s: IndexSet, t: IndexSet) -> IndexSet:
    return _binary(s, t, lambda a, b: a and b)


def complement(s: IndexSet) -> IndexSet:
    flip = str.maketrans("01", "10")
    return IndexSet(s.pre.translate(flip), s.period.translate(flip))


def difference(s: IndexSet, t: IndexSet) -> IndexSet:
    return intersect(s, complement(t))


def format_set(s: IndexSet) -> str:
    return f"pre:{s.pre};per:{s.period}"


def parse(spec: str) -> IndexSet:
    """Parse `pre:<bits>;per:<bits>`; rejects malformed input with an offset."""
    pos = 0

    def expect(literal: str):
        nonlocal pos
        if not spec.startswith(literal, pos):
            raise IndexSetSyntaxError(f"expected {literal!r}", pos)
        pos += len(literal)

    def bits() -> str:
        nonlocal pos
        start = pos
        while pos < len(spec) and spec[pos] in "01":
            pos += 1
        return spec[start:pos]

    expect("pre:")
    pre = bits()
    expect(";per:")
    period = bits()
    if not period:
        raise IndexSetSyntaxError("period must be nonempty", pos)
    if pos != len(spec):
        raise IndexSetSyntaxError("trailing input after set spec", pos)
    return IndexSet(pre, period)
