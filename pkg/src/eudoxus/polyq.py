"""Dense integer-coefficient polynomials and reduced rational-function pairs.

Coefficients are stored lowest-degree first; the zero polynomial is the empty
tuple. All arithmetic is exact (ints, with Fractions only in transient
values). This module is the shared engine behind index-dependent slopes and
the polynomial calculus layer.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

Coeffs = tuple


def trim(coeffs) -> Coeffs:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Coeffs) -> int:
    """Degree, with the convention that the zero polynomial has degree -1."""
    return len(p) - 1


def leading(p: Coeffs) -> int:
    return p[-1] if p else 0


def add(p: Coeffs, q: Coeffs) -> Coeffs:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def neg(p: Coeffs) -> Coeffs:
    return tuple(-c for c in p)


def sub(p: Coeffs, q: Coeffs) -> Coeffs:
    return add(p, neg(q))


def mul(p: Coeffs, q: Coeffs) -> Coeffs:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p: Coeffs, c) -> Coeffs:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def pow_(p: Coeffs, k: int) -> Coeffs:
    if k < 0:
        raise ValueError("negative polynomial power")
    out: Coeffs = (1,)
    base = p
    while k:
        if k & 1:
            out = mul(out, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return out


def eval_at(p: Coeffs, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def content(p: Coeffs) -> int:
    g = 0
    for c in p:
        g = _int_gcd(g, c)
    return g


def primitive(p: Coeffs) -> Coeffs:
    c = content(p)
    if c in (0, 1):
        return p
    return tuple(a // c for a in p)


def pseudo_rem(p: Coeffs, q: Coeffs) -> Coeffs:
    """Pseudo-remainder of p by q (q nonzero), up to powers of leading(q)."""
    dq = degree(q)
    lq = leading(q)
    r = list(p)
    while True:
        while r and r[-1] == 0:
            r.pop()
        dr = len(r) - 1
        if dr < dq:
            return tuple(r)
        lr = r[-1]
        r = [lq * c for c in r]
        shift = dr - dq
        for j, qc in enumerate(q):
            r[shift + j] -= lr * qc


def gcd(p: Coeffs, q: Coeffs) -> Coeffs:
    """Primitive polynomial gcd with positive leading coefficient."""
    a, b = primitive(trim(p)), primitive(trim(q))
    while b:
        a, b = b, primitive(pseudo_rem(a, b))
    if leading(a) < 0:
        a = neg(a)
    return a


def divide_exact(p: Coeffs, d: Coeffs) -> Coeffs:
    """Exact division p/d; raises ArithmeticError if not exact over the ints."""
    p, d = trim(p), trim(d)
    if not p:
        return ()
    if degree(p) < degree(d):
        raise ArithmeticError("non-exact polynomial division")
    dd, ld = degree(d), leading(d)
    r = [Fraction(c) for c in p]
    out = [Fraction(0)] * (len(p) - len(d) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = r[dd + i] / ld
        out[i] = c
        if c:
            for j, dc in enumerate(d):
                r[i + j] -= c * dc
    if any(c != 0 for c in r):
        raise ArithmeticError("non-exact polynomial division")
    ints = []
    for c in out:
        if c.denominator != 1:
            raise ArithmeticError("non-integer quotient in exact division")
        ints.append(c.numerator)
    return trim(ints)


def normalize_ratfun(num, den) -> tuple[Coeffs, Coeffs]:
    """Reduce num/den to lowest terms.

    The result has coprime numerator and denominator, joint coefficient
    content 1, and a positive leading denominator coefficient; the zero
    function is ((), (1,)). This makes equal rational functions structurally
    identical.
    """
    num, den = trim(num), trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator polynomial")
    if not num:
        return (), (1,)
    if degree(num) > 0 and degree(den) > 0:
        g = gcd(num, den)
        if degree(g) > 0:
            num, den = divide_exact(num, g), divide_exact(den, g)
    c = _int_gcd(content(num), content(den))
    if c > 1:
        num = tuple(a // c for a in num)
        den = tuple(a // c for a in den)
    if leading(den) < 0:
        num, den = neg(num), neg(den)
    return num, den


def from_fraction_coeffs(coeffs) -> tuple[Coeffs, int]:
    """Clear denominators: return (integer coefficients, common multiplier)."""
    fracs = [Fraction(c) for c in coeffs]
    m = 1
    for c in fracs:
        m = m * c.denominator // _int_gcd(m, c.denominator)
    return trim(int(c * m) for c in fracs), m


def format_poly(p: Coeffs, var: str = "i") -> str:
    if not p:
        return "0"
    parts = []
    for k in range(degree(p), -1, -1):
        c = p[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            v = var if k == 1 else f"{var}^{k}"
            body = v if abs(c) == 1 else f"{abs(c)}*{v}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
