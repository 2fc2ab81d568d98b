"""Differentiation through infinitesimal increments.

Rational functions over the rationals extend exactly to the germ field, so
the difference quotient (f(x0 + h) - f(x0))/h with h the canonical
infinitesimal is itself a germ, and its standard part is the derivative -
computed exactly, with no limits, tolerances, or floating point. The class of
functions is restricted to rational functions precisely so that every step of
this pipeline stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import hyper, polyq
from .hyper import HyperKind, RationalSlopeGerm, classify, dx, from_real, standard_part


class SubstitutionPole(ZeroDivisionError):
    """The function's denominator vanishes at the substitution point."""


@dataclass(frozen=True)
class RatFunction:
    """Quotient of integer-coefficient polynomials in one variable.

    Rational coefficients are accepted at construction and cleared to the
    reduced integer normal form, so equal functions are structurally equal.
    """

    num: polyq.Coeffs
    den: polyq.Coeffs

    def __post_init__(self):
        num, mn = polyq.from_fraction_coeffs(self.num)
        den, md = polyq.from_fraction_coeffs(self.den)
        num, den = polyq.normalize_ratfun(polyq.scale(num, md), polyq.scale(den, mn))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __add__(self, other):
        num = polyq.add(
            polyq.mul(self.num, other.den), polyq.mul(other.num, self.den)
        )
        return RatFunction(num, polyq.mul(self.den, other.den))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RatFunction(polyq.neg(self.num), self.den)

    def __mul__(self, other):
        return RatFunction(
            polyq.mul(self.num, other.num), polyq.mul(self.den, other.den)
        )

    def __truediv__(self, other):
        if not other.num:
            raise ZeroDivisionError("division by the zero function")
        return RatFunction(
            polyq.mul(self.num, other.den), polyq.mul(self.den, other.num)
        )

    def pow(self, k: int) -> "RatFunction":
        if k < 0:
            raise ValueError("negative power; divide instead")
        return RatFunction(polyq.pow_(self.num, k), polyq.pow_(self.den, k))

    def __call__(self, x0) -> Fraction:
        x0 = Fraction(x0)
        dv = polyq.eval_at(self.den, x0)
        if dv == 0:
            raise SubstitutionPole(f"pole at x = {x0}")
        return Fraction(polyq.eval_at(self.num, x0)) / dv

    def is_polynomial(self) -> bool:
        return polyq.degree(self.den) == 0

    def __str__(self) -> str:
        num = polyq.format_poly(self.num, "x")
        if self.den == (1,):
            return num
        return f"({num})/({polyq.format_poly(self.den, 'x')})"


def constant(q) -> RatFunction:
    q = Fraction(q)
    return RatFunction((q.numerator,), (q.denominator,))


def variable() -> RatFunction:
    return RatFunction((0, 1), (1,))


def from_coeffs(coeffs) -> RatFunction:
    """Polynomial with the given coefficients, lowest degree first."""
    return RatFunction(tuple(coeffs), (1,))


def _substitute(p: polyq.Coeffs, num: polyq.Coeffs, den: polyq.Coeffs) -> polyq.Coeffs:
    """Numerator of p(num/den) over the common denominator den^deg(p)."""
    d = polyq.degree(p)
    if d < 0:
        return ()
    acc: polyq.Coeffs = ()
    for k, c in enumerate(p):
        if c:
            term = polyq.scale(
                polyq.mul(polyq.pow_(num, k), polyq.pow_(den, d - k)), c
            )
            acc = polyq.add(acc, term)
    return acc


def extend(f: RatFunction, x: RationalSlopeGerm) -> RationalSlopeGerm:
    """Evaluate f at a germ argument by exact substitution."""
    a = _substitute(f.num, x.num, x.den)
    b = _substitute(f.den, x.num, x.den)
    if not b:
        raise SubstitutionPole("denominator vanishes identically at the argument")
    dn, dd = polyq.degree(f.num), polyq.degree(f.den)
    # f(x) = (a / den^dn) / (b / den^dd) = a*den^dd / (b*den^dn)
    num = polyq.mul(a, polyq.pow_(x.den, dd))
    den = polyq.mul(b, polyq.pow_(x.den, dn))
    return RationalSlopeGerm(num, den)


def derivative_at(f: RatFunction, x0) -> Fraction:
    """The real adequal to the ratio (f(x0 + h) - f(x0)) / h.

    For rational f this is the formal derivative at x0, exactly.
    """
    x0 = Fraction(x0)
    fx0 = f(x0)  # raises SubstitutionPole off the domain
    h = dx()
    shifted = hyper.add(from_real(x0), h)
    dy = hyper.sub(extend(f, shifted), from_real(fx0))
    return standard_part(hyper.div(dy, h))


def adequal(x: RationalSlopeGerm, y: RationalSlopeGerm) -> bool:
    """True when x - y is zero or infinitesimal."""
    kind = classify(hyper.sub(x, y)).kind
    return kind in (
        HyperKind.ZERO,
        HyperKind.POSITIVE_INFINITESIMAL,
        HyperKind.NEGATIVE_INFINITESIMAL,
    )
