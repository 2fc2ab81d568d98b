"""The ordered field of reals represented by almost homomorphisms.

A real is an almost homomorphism considered modulo bounded maps; the slope
lim f(n)/n is the number it denotes, and the certified bound C turns every
finite computation into an interval statement: |f(n)/n - r| <= C/n for n >= 1.

Equality of field elements is semidecidable only, so the API never pretends
otherwise: comparisons take a budget and may answer "indistinguishable within
eps", and `equals_within` is the window surrogate used by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import ahom
from .ahom import (
    AlmostHom,
    Compose,
    FloorLinear,
    FloorSqrt,
    IntScale,
    Invert,
    Neg,
    Sum,
)


class UndecidedSign(Exception):
    """The sign scan exhausted its budget; carries the certified radius."""

    def __init__(self, eps: Fraction, budget: int):
        super().__init__(
            f"sign undecided within budget {budget}; |value| <= {eps}"
        )
        self.eps = eps
        self.budget = budget


@dataclass(frozen=True)
class Positive:
    pass


@dataclass(frozen=True)
class Negative:
    pass


@dataclass(frozen=True)
class ZeroWithin:
    """Certified interval verdict: the represented real r has |r| <= eps."""

    eps: Fraction


@dataclass(frozen=True)
class Less:
    pass


@dataclass(frozen=True)
class Greater:
    pass


@dataclass(frozen=True)
class IndistinguishableWithin:
    eps: Fraction


@dataclass(frozen=True)
class EudoxusReal:
    """A real number carried by a chosen certified representative."""

    rep: AlmostHom

    # -- field structure ----------------------------------------------------

    def add(self, other: "EudoxusReal") -> "EudoxusReal":
        return EudoxusReal(Sum(self.rep, other.rep))

    def neg(self) -> "EudoxusReal":
        return EudoxusReal(Neg(self.rep))

    def sub(self, other: "EudoxusReal") -> "EudoxusReal":
        return self.add(other.neg())

    def mul(self, other: "EudoxusReal") -> "EudoxusReal":
        # Multiplication is composition of representatives.
        return EudoxusReal(Compose(self.rep, other.rep))

    def recip(self, budget: int) -> "EudoxusReal":
        """Multiplicative inverse, requiring a decided sign within budget."""
        verdict = self.sign_budget(budget)
        if isinstance(verdict, ZeroWithin):
            raise UndecidedSign(verdict.eps, budget)
        if isinstance(verdict, Negative):
            return self.neg().recip(budget).neg()
        f = self.rep
        n = 1
        while n <= budget:
            if f.eval(n) > f.bound:
                return EudoxusReal(Invert(f, n))
            n *= 2
        raise AssertionError("positive verdict without witness")

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __mul__(self, other):
        return self.mul(other)

    def __neg__(self):
        return self.neg()

    # -- observation --------------------------------------------------------

    def slope_approx(self, k: int) -> Fraction:
        """rep(2^k)/2^k; within bound/2^k of the represented real."""
        if k < 0:
            raise ValueError("dyadic depth must be nonnegative")
        n = 1 << k
        return Fraction(self.rep.eval(n), n)

    def sign_budget(self, budget: int):
        """Scan n = 1, 2, 4, ... <= budget for a certified sign witness.

        f(n) > C certifies r > 0 and f(n) < -C certifies r < 0 because
        |f(n) - r*n| <= C for n >= 1. If no witness appears the verdict is
        ZeroWithin((C + |f(n_max)|)/n_max), which is equally certified.
        """
        if budget < 1:
            raise ValueError("budget must be positive")
        f, c = self.rep, self.rep.bound
        n = 1
        last = 1
        while n <= budget:
            v = f.eval(n)
            if v > c:
                return Positive()
            if v < -c:
                return Negative()
            last = n
            n *= 2
        return ZeroWithin(Fraction(c + abs(f.eval(last)), last))

    def compare(self, other: "EudoxusReal", budget: int):
        verdict = self.sub(other).sign_budget(budget)
        if isinstance(verdict, Positive):
            return Greater()
        if isinstance(verdict, Negative):
            return Less()
        return IndistinguishableWithin(verdict.eps)

    def equals_within(self, other: "EudoxusReal", window: int = 256) -> bool:
        """Window surrogate for class equality.

        If the two elements are equal then |f(n) - g(n)| <= C_f + C_g for all
        n >= 0 and <= 3(C_f + C_g) for n < 0 (negative arguments pick up the
        f(0) and d_f(n, -n) terms), so a violation refutes equality while a
        pass certifies agreement at every probed scale.
        """
        f, g = self.rep, other.rep
        tol = f.bound + g.bound
        pos = range(window + 1)
        for a, b in zip(ahom.eval_range(f, pos), ahom.eval_range(g, pos)):
            if abs(a - b) > tol:
                return False
        tol3 = 3 * tol
        neg_side = range(-window, 0)
        for a, b in zip(ahom.eval_range(f, neg_side), ahom.eval_range(g, neg_side)):
            if abs(a - b) > tol3:
                return False
        return True

    def to_decimal(self, digits: int) -> str:
        """Signed decimal string within 10^-digits of the represented real.

        The evaluation index n is chosen with bound/n <= 0.5 * 10^-(digits+2),
        two guard digits below the contract, so the final rounding step owns
        almost the whole error allowance.
        """
        if digits < 1:
            raise ValueError("digits must be positive")
        n = 2 * self.rep.bound * 10 ** (digits + 2)
        v = Fraction(self.rep.eval(n), n)
        return decimal_of_fraction(v, digits)


def decimal_of_fraction(value: Fraction, digits: int) -> str:
    """Fixed-point rendering with round-half-up at the last digit."""
    if digits < 1:
        raise ValueError("digits must be positive")
    scaled = value * 10**digits
    units = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if units < 0 else ""
    ipart, fpart = divmod(abs(units), 10**digits)
    return f"{sign}{ipart}.{fpart:0{digits}d}"


def from_rational(p: int, q: int) -> EudoxusReal:
    """The rational p/q, represented exactly by the slope-p/q line."""
    return EudoxusReal(FloorLinear(p, q))


def from_sqrt_int(k: int) -> EudoxusReal:
    """The square root of a nonnegative integer k."""
    return EudoxusReal(FloorSqrt(k))


def zero() -> EudoxusReal:
    return from_rational(0, 1)


def one() -> EudoxusReal:
    return from_rational(1, 1)


# -- decidable slice of equality ---------------------------------------------
#
# On the rule catalogue many elements have an exact slope of the shape
# q * sqrt(k) with rational q and squarefree k. Extracting that normal form
# where possible gives a sound, certified equality decision; a certified
# window violation gives a sound inequality decision; everything else is
# honestly undecided (None).


def _squarefree(k: int) -> tuple[int, int]:
    """Split k = s^2 * m with m squarefree; returns (s, m)."""
    if k == 0:
        return 0, 1
    s, m, d = 1, k, 2
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
            s *= d
        d += 1
    return s, m


def exact_slope(f: AlmostHom):
    """Exact slope as (q, k) meaning q*sqrt(k), k squarefree; None if unknown."""
    if isinstance(f, FloorLinear):
        return Fraction(f.p, f.q), 1
    if isinstance(f, FloorSqrt):
        s, m = _squarefree(f.k)
        return Fraction(s), m
    if isinstance(f, Neg):
        s = exact_slope(f.inner)
        return None if s is None else (-s[0], s[1])
    if isinstance(f, IntScale):
        s = exact_slope(f.inner)
        if s is None:
            return None
        q, k = Fraction(f.m) * s[0], s[1]
        return (q, 1) if q == 0 else (q, k)
    if isinstance(f, Sum):
        a, b = exact_slope(f.left), exact_slope(f.right)
        if a is None or b is None:
            return None
        if a[0] == 0:
            return b
        if b[0] == 0:
            return a
        if a[1] == b[1]:
            q = a[0] + b[0]
            return (q, 1) if q == 0 else (q, a[1])
        return None
    if isinstance(f, Compose):
        a, b = exact_slope(f.outer), exact_slope(f.inner)
        if a is None or b is None:
            return None
        q = a[0] * b[0]
        if q == 0:
            return Fraction(0), 1
        s, m = _squarefree(a[1] * b[1])
        return q * s, m
    if isinstance(f, Invert):
        s = exact_slope(f.inner)
        if s is None or s[0] == 0:
            return None
        # 1/(q*sqrt(k)) = (1/(q*k)) * sqrt(k)
        return 1 / (s[0] * s[1]), s[1]
    return None


def certified_equal(x: EudoxusReal, y: EudoxusReal, window: int = 64):
    """Three-valued equality: True/False when certified, None when undecided."""
    if x.rep == y.rep:
        return True
    sx, sy = exact_slope(x.rep), exact_slope(y.rep)
    if sx is not None and sy is not None:
        return sx == sy
    if not x.equals_within(y, window):
        return False
    return None
