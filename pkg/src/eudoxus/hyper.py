"""Infinitesimal-enriched arithmetic built from index-dependent slopes.

The decidable tier is `RationalSlopeGerm`: an element whose component at
index n is the real of slope r(n) = P(n)/Q(n) for integer polynomials P, Q.
Ordering such germs needs no ultrafilter at all - the sign of r_x(i) - r_y(i)
is eventually constant, so the verdict set is cofinite or finite and every
non-principal ultrafilter agrees. Classification into zero / infinitesimal /
appreciable / infinite reads off the degree gap and leading coefficients.

The general tier is a rescaling: an arbitrary rule from indices to reals of
the certified catalogue. Equality there genuinely depends on the ultrafilter,
so it is decided through the simulator when the agreement pattern has an
eventually periodic certificate, and reported as merely empirical otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import indexset, polyq, ufsim
from .indexset import IndexSet
from .reals import EudoxusReal, certified_equal, from_rational
from .ufsim import FilterState, Verdict


class DivisionByZeroGerm(ZeroDivisionError):
    pass


class PoleAtIndex(ValueError):
    """The component slope is undefined at this index (denominator root)."""

    def __init__(self, n: int):
        super().__init__(f"pole at index {n}")
        self.n = n


class InfiniteElement(ValueError):
    """Standard part requested for an infinite element."""


@dataclass(frozen=True)
class RationalSlopeGerm:
    """Slope function r(i) = num(i)/den(i), stored in reduced normal form."""

    num: polyq.Coeffs
    den: polyq.Coeffs

    def __post_init__(self):
        num, den = polyq.normalize_ratfun(self.num, self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return polyq.degree(self.num) <= 0 and polyq.degree(self.den) == 0

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return RationalSlopeGerm(polyq.neg(self.num), self.den)

    def __str__(self) -> str:
        return format_germ(self)


def germ(num, den=(1,)) -> RationalSlopeGerm:
    return RationalSlopeGerm(tuple(num), tuple(den))


def dx() -> RationalSlopeGerm:
    """The canonical positive infinitesimal: slope 1/i at index i."""
    return germ((1,), (0, 1))


def omega() -> RationalSlopeGerm:
    """The canonical infinite element: slope i at index i."""
    return germ((0, 1))


def from_real(q) -> RationalSlopeGerm:
    """Constant-in-index embedding of a rational number."""
    q = Fraction(q)
    return germ((q.numerator,), (q.denominator,))


def add(x: RationalSlopeGerm, y: RationalSlopeGerm) -> RationalSlopeGerm:
    num = polyq.add(polyq.mul(x.num, y.den), polyq.mul(y.num, x.den))
    return RationalSlopeGerm(num, polyq.mul(x.den, y.den))


def sub(x: RationalSlopeGerm, y: RationalSlopeGerm) -> RationalSlopeGerm:
    return add(x, -y)


def mul(x: RationalSlopeGerm, y: RationalSlopeGerm) -> RationalSlopeGerm:
    return RationalSlopeGerm(polyq.mul(x.num, y.num), polyq.mul(x.den, y.den))


def div(x: RationalSlopeGerm, y: RationalSlopeGerm) -> RationalSlopeGerm:
    if y.is_zero():
        raise DivisionByZeroGerm("division by the zero germ")
    return RationalSlopeGerm(polyq.mul(x.num, y.den), polyq.mul(x.den, y.num))


def pow_(x: RationalSlopeGerm, k: int) -> RationalSlopeGerm:
    if k < 0:
        raise ValueError("negative germ power; divide instead")
    return RationalSlopeGerm(polyq.pow_(x.num, k), polyq.pow_(x.den, k))


class Order(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


def compare(x: RationalSlopeGerm, y: RationalSlopeGerm) -> Order:
    """Eventual-sign comparison; ultrafilter-independent on this tier."""
    d = sub(x, y)
    if d.is_zero():
        return Order.EQUAL
    return Order.GREATER if polyq.leading(d.num) > 0 else Order.LESS


class HyperKind(enum.Enum):
    ZERO = "Zero"
    POSITIVE_INFINITESIMAL = "PositiveInfinitesimal"
    NEGATIVE_INFINITESIMAL = "NegativeInfinitesimal"
    APPRECIABLE_FINITE = "AppreciableFinite"
    POSITIVE_INFINITE = "PositiveInfinite"
    NEGATIVE_INFINITE = "NegativeInfinite"


@dataclass(frozen=True)
class HyperClass:
    kind: HyperKind
    st: Optional[Fraction]  # standard part; None for infinite elements

    def is_finite(self) -> bool:
        return self.st is not None


def classify(x: RationalSlopeGerm) -> HyperClass:
    if x.is_zero():
        return HyperClass(HyperKind.ZERO, Fraction(0))
    gap = polyq.degree(x.num) - polyq.degree(x.den)
    lead = Fraction(polyq.leading(x.num), polyq.leading(x.den))
    if gap < 0:
        kind = (
            HyperKind.POSITIVE_INFINITESIMAL
            if lead > 0
            else HyperKind.NEGATIVE_INFINITESIMAL
        )
        return HyperClass(kind, Fraction(0))
    if gap == 0:
        return HyperClass(HyperKind.APPRECIABLE_FINITE, lead)
    kind = HyperKind.POSITIVE_INFINITE if lead > 0 else HyperKind.NEGATIVE_INFINITE
    return HyperClass(kind, None)


def standard_part(x: RationalSlopeGerm) -> Fraction:
    """The real infinitely close to a finite germ; errors on infinite ones."""
    c = classify(x)
    if c.st is None:
        raise InfiniteElement(f"{format_germ(x)} has no standard part")
    return c.st


def leading_term(x: RationalSlopeGerm) -> tuple[Fraction, int]:
    """Asymptotics c*i^d of the slope function; (0, 0) for the zero germ."""
    if x.is_zero():
        return Fraction(0), 0
    c = Fraction(polyq.leading(x.num), polyq.leading(x.den))
    return c, polyq.degree(x.num) - polyq.degree(x.den)


def phi_component(x: RationalSlopeGerm, n: int) -> Fraction:
    """The component slope at index n."""
    dv = polyq.eval_at(x.den, n)
    if dv == 0:
        raise PoleAtIndex(n)
    return Fraction(polyq.eval_at(x.num, n), dv)


def realize_component(x: RationalSlopeGerm, n: int) -> EudoxusReal:
    """The component at index n as a certified real of the exact slope."""
    r = phi_component(x, n)
    return from_rational(r.numerator, r.denominator)


def format_germ(x: RationalSlopeGerm) -> str:
    num = polyq.format_poly(x.num)
    den = polyq.format_poly(x.den)
    if x.den == (1,):
        return num
    if " " in num or "/" in num:
        num = f"({num})"
    if " " in den:
        den = f"({den})"
    return f"{num}/{den}"


def format_leading_term(x: RationalSlopeGerm) -> str:
    c, d = leading_term(x)
    return f"{c}*i^{d}"


# -- general rescalings -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneralRescaling:
    """An index-to-real rule; each component carries its own certificate."""

    component_fn: Callable[[int], EudoxusReal]
    description: str = ""

    def component(self, n: int) -> EudoxusReal:
        return self.component_fn(n)


@dataclass(frozen=True)
class PiecewiseRescaling:
    """A rescaling given by finitely many eventually periodic pieces.

    The piece sets must partition the index line; the structure makes
    per-class equality questions decidable where a bare rule would not be.
    """

    pieces: tuple[tuple[IndexSet, EudoxusReal], ...]
    description: str = ""

    def __post_init__(self):
        union = indexset.empty()
        for s, _ in self.pieces:
            if not intersect_empty_check(union, s):
                raise ValueError("piece sets overlap")
            union = indexset.union(union, s)
        if union != indexset.full():
            raise ValueError("piece sets do not cover the index line")

    def component(self, n: int) -> EudoxusReal:
        for s, v in self.pieces:
            if s.member(n):
                return v
        raise AssertionError("pieces cover the index line")

    def _combine(self, other: "PiecewiseRescaling", op, tag: str):
        out = []
        for s, v in self.pieces:
            for t, w in other.pieces:
                cell = indexset.intersect(s, t)
                if cell != indexset.empty():
                    out.append((cell, op(v, w)))
        return PiecewiseRescaling(
            tuple(out), f"({self.description} {tag} {other.description})"
        )

    def add(self, other: "PiecewiseRescaling") -> "PiecewiseRescaling":
        return self._combine(other, lambda a, b: a.add(b), "+")

    def mul(self, other: "PiecewiseRescaling") -> "PiecewiseRescaling":
        return self._combine(other, lambda a, b: a.mul(b), "*")


def intersect_empty_check(s: IndexSet, t: IndexSet) -> bool:
    return indexset.intersect(s, t) == indexset.empty()


def constant_rescaling(x: EudoxusReal, description: str = "") -> PiecewiseRescaling:
    return PiecewiseRescaling(((indexset.full(), x),), description)


def piecewise(pairs, description: str = "") -> PiecewiseRescaling:
    return PiecewiseRescaling(tuple(pairs), description)


# -- equality modulo the simulated ultrafilter --------------------------------


@dataclass(frozen=True)
class CertifiedEqual:
    agreement: IndexSet


@dataclass(frozen=True)
class CertifiedUnequal:
    agreement: IndexSet


@dataclass(frozen=True)
class Empirical:
    agreement_fraction: Fraction
    window: int


def _detect_pattern(agree: list[bool], window: int) -> Optional[IndexSet]:
    limit = max(1, window // 3)
    for d in range(1, limit + 1):
        for p in range(0, limit + 1):
            if p + 2 * d > window + 1:
                break
            ok = all(agree[n] == agree[p + (n - p) % d] for n in range(p, window + 1))
            if ok:
                # Bits must sit at absolute phase: period[j] is the agreement
                # value at indices congruent to j past the preperiod.
                per = [""] * d
                for j in range(d):
                    n = p + ((j - p) % d)
                    per[j] = "1" if agree[n] else "0"
                pre = "".join("1" if agree[n] else "0" for n in range(p))
                return IndexSet(pre, "".join(per))
    return None


def eq_mod_filter(
    x,
    y,
    state: FilterState,
    window: int = 48,
    certificate: Optional[IndexSet] = None,
):
    """Equality of two rescalings modulo the simulated ultrafilter.

    Computes per-index equality verdicts for indices 0..window. When every
    verdict is exact (catalogue slope extraction or a certified window
    refutation) and the pattern is eventually periodic - matching a supplied
    certificate or detected outright - the agreement set is routed through
    the simulator for a Certified verdict. Anything else is reported as
    Empirical, never guessed.

    Returns (verdict, updated filter state).
    """
    agree: list[bool] = []
    decisive = True
    for n in range(window + 1):
        v = certified_equal(x.component(n), y.component(n))
        if v is None:
            decisive = False
            v = x.component(n).equals_within(y.component(n), 32)
        agree.append(v)

    pattern = None
    if certificate is not None:
        if all(certificate.member(n) == agree[n] for n in range(window + 1)):
            pattern = certificate
    if pattern is None:
        pattern = _detect_pattern(agree, window)

    if decisive and pattern is not None:
        verdict, state = ufsim.query(state, pattern)
        if verdict is Verdict.ACCEPTED:
            return CertifiedEqual(pattern), state
        return CertifiedUnequal(pattern), state
    fraction = Fraction(sum(agree), window + 1)
    return Empirical(fraction, window), state
