"""Deterministic lazy simulator of a non-principal ultrafilter on the naturals.

Restricted to eventually periodic queries, membership can be decided greedily
while preserving the finite intersection property: the state keeps the meet
of everything committed so far, a queried set is accepted whenever its
intersection with the meet is still infinite, and rejected otherwise (in
which case the complement is committed). Soundness of the rejection branch:
if S meet the running meet is finite then, the meet being infinite, its
complement part is infinite, so the meet never collapses.

Accept-first makes the simulation deterministic and replayable; any
FIP-preserving policy realizes the restriction of some genuine non-principal
ultrafilter, and on cofinite/finite sets every such ultrafilter agrees, so
those verdicts are forced rather than chosen.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import indexset
from .indexset import IndexSet


class TraceError(ValueError):
    """Malformed or inconsistent trace; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class Verdict(enum.Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"


class Containment(enum.Enum):
    FORCED_IN = "ForcedIn"
    FORCED_OUT = "ForcedOut"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class FilterState:
    """Decision log plus the running meet of all commitments."""

    log: tuple[tuple[IndexSet, Verdict], ...]
    meet: IndexSet


def fresh_state() -> FilterState:
    return FilterState((), indexset.full())


def query(state: FilterState, s: IndexSet) -> tuple[Verdict, FilterState]:
    """Decide s, committing the decision. Idempotent on repeated queries."""
    for logged, verdict in state.log:
        if logged == s:
            return verdict, state
    hit = indexset.intersect(s, state.meet)
    if hit.is_infinite():
        new = FilterState(state.log + ((s, Verdict.ACCEPTED),), hit)
        return Verdict.ACCEPTED, new
    miss = indexset.intersect(indexset.complement(s), state.meet)
    new = FilterState(state.log + ((s, Verdict.REJECTED),), miss)
    return Verdict.REJECTED, new


def contains(state: FilterState, s: IndexSet) -> Containment:
    """Read-only closure check against the current commitments."""
    if indexset.difference(state.meet, s).is_finite():
        return Containment.FORCED_IN
    if indexset.intersect(s, state.meet).is_finite():
        return Containment.FORCED_OUT
    return Containment.UNDECIDED


def replay(entries) -> FilterState:
    """Rebuild a state from (set, verdict) pairs, checking every decision."""
    state = fresh_state()
    for line, (s, recorded) in enumerate(entries, start=1):
        computed, state = query(state, s)
        if computed is not recorded:
            raise TraceError(
                f"inconsistent trace: {indexset.format_set(s)} recorded as "
                f"{recorded.value} but the policy decides {computed.value}",
                line,
            )
    return state


def export_trace(state: FilterState) -> str:
    lines = [
        f"{verdict.value} {indexset.format_set(s)}" for s, verdict in state.log
    ]
    return "".join(line + "\n" for line in lines)


def import_trace(text: str) -> FilterState:
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise TraceError("expected '<verdict> <set spec>'", line_no)
        word, spec = parts
        try:
            verdict = Verdict(word)
        except ValueError:
            raise TraceError(f"unknown verdict {word!r}", line_no) from None
        try:
            s = indexset.parse(spec)
        except indexset.IndexSetSyntaxError as exc:
            raise TraceError(f"bad set spec: {exc}", line_no) from None
        entries.append((s, verdict))
    return replay(entries)
