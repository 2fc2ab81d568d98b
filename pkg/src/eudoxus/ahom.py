"""Almost homomorphisms of the integers with certified discrepancy bounds.

An almost homomorphism is a total map f: Z -> Z whose discrepancy

    d_f(p, q) = f(p + q) - f(p) - f(q)

has finite range. Every value here is a node of a closed rule catalogue and
carries a certified integer bound C with |d_f(p, q)| <= C for all p, q. The
catalogue keeps evaluation total, deterministic and serializable, and lets
bounds propagate structurally, so downstream error estimates are certificates
rather than hopes. No floating point is used anywhere in this module.

Concurrency: nodes are immutable after construction. The per-node memo table
only caches values of a pure function, so concurrent use from several threads
is safe (a race can at worst recompute the same value).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, isqrt


class CertificateError(Exception):
    """A certified discrepancy bound was violated; this is a construction bug."""


class RuleSyntaxError(ValueError):
    """Malformed rule text; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


_cache_limit: int | None = None


def set_cache_limit(limit: int | None) -> None:
    """Cap per-node memo tables at `limit` entries (None = unbounded).

    Eviction policy is discard-all: when a table is full the whole table is
    cleared before the next insert.
    """
    global _cache_limit
    if limit is not None and limit < 1:
        raise ValueError("cache limit must be positive or None")
    _cache_limit = limit


class AlmostHom:
    """Base class of rule-tree nodes.

    Subclasses provide `_raw` (the closed-form evaluator) and `bound` (the
    certified discrepancy bound). `eval` memoizes per node; evaluation is
    observationally pure.
    """

    bound: int

    @cached_property
    def _memo(self) -> dict:
        return {}

    def eval(self, a: int) -> int:
        memo = self._memo
        v = memo.get(a)
        if v is None:
            v = self._raw(a)
            if _cache_limit is not None and len(memo) >= _cache_limit:
                memo.clear()
            memo[a] = v
        return v

    def _raw(self, a: int) -> int:
        raise NotImplementedError

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class FloorLinear(AlmostHom):
    """a -> floor(p*a/q), the slope-p/q line sampled on the integers.

    Floor is toward minus infinity, so the map is exact on negative inputs
    too. The discrepancy floor(r(p+q)) - floor(rp) - floor(rq) is always
    0 or 1, hence the constant bound.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("denominator must be a positive integer")

    @property
    def bound(self) -> int:
        return 1

    def _raw(self, a: int) -> int:
        return (self.p * a) // self.q


@dataclass(frozen=True)
class FloorSqrt(AlmostHom):
    """a -> sign(a) * isqrt(k * a^2), the slope-sqrt(k) map.

    For a >= 0 this is floor(sqrt(k) * a); negative arguments use the odd
    extension, which changes each value by at most 1 and therefore keeps the
    discrepancy within 2.
    """

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("radicand must be nonnegative")

    @property
    def bound(self) -> int:
        return 2

    def _raw(self, a: int) -> int:
        if a < 0:
            return -isqrt(self.k * a * a)
        return isqrt(self.k * a * a)


@dataclass(frozen=True)
class Sum(AlmostHom):
    """Pointwise sum; discrepancies add, so bounds add."""

    left: AlmostHom
    right: AlmostHom

    @property
    def bound(self) -> int:
        return self.left.bound + self.right.bound

    def _raw(self, a: int) -> int:
        return self.left.eval(a) + self.right.eval(a)


@dataclass(frozen=True)
class Neg(AlmostHom):
    """Pointwise negation; the bound is unchanged."""

    inner: AlmostHom

    @property
    def bound(self) -> int:
        return self.inner.bound

    def _raw(self, a: int) -> int:
        return -self.inner.eval(a)


@dataclass(frozen=True)
class IntScale(AlmostHom):
    """Pointwise integer multiple m*f; |d| scales by |m|."""

    m: int
    inner: AlmostHom

    @property
    def bound(self) -> int:
        return max(1, abs(self.m) * self.inner.bound)

    def _raw(self, a: int) -> int:
        return self.m * self.inner.eval(a)


@dataclass(frozen=True)
class Compose(AlmostHom):
    """Composition outer(inner(a)).

    Writing inner(p+q) = inner(p) + inner(q) + e with |e| <= C_inner gives

        d = outer(e) + d_outer(inner(p) + inner(q), e) + d_outer(inner(p), inner(q))

    so |d| <= 2*C_outer + max(|outer(e)| : |e| <= C_inner). The max is over a
    finite range and is computed by direct evaluation.
    """

    outer: AlmostHom
    inner: AlmostHom

    @cached_property
    def bound(self) -> int:
        c = self.inner.bound
        peak = max(abs(self.outer.eval(e)) for e in range(-c, c + 1))
        return 2 * self.outer.bound + peak

    def _raw(self, a: int) -> int:
        return self.outer.eval(self.inner.eval(a))


@dataclass(frozen=True)
class Invert(AlmostHom):
    """Order-theoretic inverse of a certified-positive almost homomorphism.

    For p >= 0 the value is min{a >= 0 : inner(a) >= p}, extended oddly to
    p < 0; this represents 1/r when inner represents r > 0. `witness_n` is an
    index with inner(witness_n) > inner.bound, certifying positivity; from it
    a positive rational lower bound r_lo <= r is derived, giving the
    certificate |value(p) - p/r| <= C/r + 1 and hence the bound 3*(C/r_lo + 1).
    """

    inner: AlmostHom
    witness_n: int

    def __post_init__(self):
        if self.witness_n < 1:
            raise ValueError("witness index must be positive")
        if self.inner.eval(self.witness_n) <= self.inner.bound:
            raise ValueError("witness does not certify positivity")

    @cached_property
    def _r_lo(self) -> Fraction:
        # Best certified lower bound on the represented slope from a fixed
        # schedule of probe indices (deterministic for a given rule tree).
        f, c = self.inner, self.inner.bound
        n = self.witness_n
        best = Fraction(f.eval(n) - c, n)
        for _ in range(12):
            n *= 2
            cand = Fraction(f.eval(n) - c, n)
            if cand > best:
                best = cand
        return best

    @cached_property
    def bound(self) -> int:
        c = self.inner.bound
        return ceil(3 * (c / self._r_lo + 1))

    def _raw(self, a: int) -> int:
        if a < 0:
            return -self._search(-a)
        return self._search(a)

    def _search(self, p: int) -> int:
        f, c = self.inner, self.inner.bound
        n = max(self.witness_n, 1024)
        while True:
            fn = f.eval(n)
            lo = Fraction(fn - c, n)
            hi = Fraction(fn + c, n)
            if lo > 0:
                a_lo = max(0, ceil(Fraction(p - c) / hi)) if p > c else 0
                a_hi = ceil(Fraction(p + c) / lo) + 1
                if a_hi - a_lo <= max(64, ceil(2 * c / lo) + 8):
                    break
            n *= 2
        a = a_lo
        while f.eval(a) < p:
            a += 1
        return a


def add(f: AlmostHom, g: AlmostHom) -> AlmostHom:
    return Sum(f, g)


def neg(f: AlmostHom) -> AlmostHom:
    return Neg(f)


def int_scale(m: int, f: AlmostHom) -> AlmostHom:
    return IntScale(m, f)


def compose(f: AlmostHom, g: AlmostHom) -> AlmostHom:
    return Compose(f, g)


def eval_range(f: AlmostHom, args) -> list[int]:
    """Evaluate f on an iterable of arguments in bulk.

    Semantically identical to [f.eval(a) for a in args] but avoids per-point
    dispatch for the closed-form nodes; window checks and certificate audits
    lean on this.
    """
    if isinstance(f, FloorLinear):
        p, q = f.p, f.q
        return [p * a // q for a in args]
    if isinstance(f, FloorSqrt):
        k = f.k
        return [isqrt(k * a * a) if a >= 0 else -isqrt(k * a * a) for a in args]
    if isinstance(f, Sum):
        args = list(args)
        return [
            l + r
            for l, r in zip(eval_range(f.left, args), eval_range(f.right, args))
        ]
    if isinstance(f, Neg):
        return [-v for v in eval_range(f.inner, args)]
    if isinstance(f, IntScale):
        m = f.m
        return [m * v for v in eval_range(f.inner, args)]
    if isinstance(f, Compose):
        return eval_range(f.outer, eval_range(f.inner, args))
    return [f.eval(a) for a in args]


def discrepancy(f: AlmostHom, p: int, q: int) -> int:
    """d_f(p, q) = f(p+q) - f(p) - f(q), checked against the certificate."""
    d = f.eval(p + q) - f.eval(p) - f.eval(q)
    if abs(d) > f.bound:
        raise CertificateError(
            f"discrepancy {d} at ({p}, {q}) exceeds certified bound "
            f"{f.bound} for {format_rule(f)}"
        )
    return d


@dataclass(frozen=True)
class BoundReport:
    max_abs_discrepancy: int
    ok: bool


def verify_bound(f: AlmostHom, window: int) -> BoundReport:
    """Exhaustively audit the certificate over p, q in [-window, window]."""
    if window < 1:
        raise ValueError("window must be positive")
    vals = eval_range(f, range(-2 * window, 2 * window + 1))
    base = 2 * window
    worst = 0
    for p in range(-window, window + 1):
        fp = vals[base + p]
        row = base + p
        for q in range(-window, window + 1):
            d = vals[row + q] - fp - vals[base + q]
            if d < 0:
                d = -d
            if d > worst:
                worst = d
    return BoundReport(worst, worst <= f.bound)


# --- canonical text form ---------------------------------------------------
#
# linear(p/q) | sqrt(k) | sum(A,B) | neg(A) | scale(m,A) | compose(A,B)
# | invert(A,n) -- no whitespace; round-trips exactly.


def format_rule(f: AlmostHom) -> str:
    if isinstance(f, FloorLinear):
        return f"linear({f.p}/{f.q})"
    if isinstance(f, FloorSqrt):
        return f"sqrt({f.k})"
    if isinstance(f, Sum):
        return f"sum({format_rule(f.left)},{format_rule(f.right)})"
    if isinstance(f, Neg):
        return f"neg({format_rule(f.inner)})"
    if isinstance(f, IntScale):
        return f"scale({f.m},{format_rule(f.inner)})"
    if isinstance(f, Compose):
        return f"compose({format_rule(f.outer)},{format_rule(f.inner)})"
    if isinstance(f, Invert):
        return f"invert({format_rule(f.inner)},{f.witness_n})"
    raise TypeError(f"unknown rule node {type(f).__name__}")


class _RuleParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str):
        raise RuleSyntaxError(message, self.pos)

    def expect(self, ch: str):
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.fail("expected integer")
        return int(self.text[start:self.pos])

    def name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            self.fail("expected rule name")
        return self.text[start:self.pos]

    def rule(self) -> AlmostHom:
        tag = self.name()
        self.expect("(")
        if tag == "linear":
            p = self.integer()
            self.expect("/")
            q = self.integer()
            node: AlmostHom = FloorLinear(p, q)
        elif tag == "sqrt":
            node = FloorSqrt(self.integer())
        elif tag == "sum":
            left = self.rule()
            self.expect(",")
            node = Sum(left, self.rule())
        elif tag == "neg":
            node = Neg(self.rule())
        elif tag == "scale":
            m = self.integer()
            self.expect(",")
            node = IntScale(m, self.rule())
        elif tag == "compose":
            outer = self.rule()
            self.expect(",")
            node = Compose(outer, self.rule())
        elif tag == "invert":
            inner = self.rule()
            self.expect(",")
            node = Invert(inner, self.integer())
        else:
            self.fail(f"unknown rule name {tag!r}")
        self.expect(")")
        return node


def parse_rule(text: str) -> AlmostHom:
    """Parse the canonical text form; inverse of `format_rule`."""
    parser = _RuleParser(text)
    node = parser.rule()
    if parser.pos != len(text):
        parser.fail("trailing input after rule")
    return node
