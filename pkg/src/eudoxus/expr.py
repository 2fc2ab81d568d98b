"""Tokenizer, parser and two-sorted type checker for the CLI expressions.

Grammar (normative for the command line):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ['^' int]                 -- power is nonassociative
    atom   := int | 'sqrt' '(' int ')' | 'dx' | 'omega' | 'x'
            | 'st' '(' expr ')' | 'classify' '(' expr ')' | '(' expr ')'

A quotient of two integer literals is folded to a rational literal after
parsing, which is the only constant folding performed. Power exponents are
integer literals because only integer powers are exact in both value tiers.

Sorts: Real (exact reals), Hyper (germs), Poly (derivative bodies). Real
promotes to Hyper in mixed nodes; `x` is only meaningful in a derivative
body; `dx`/`omega` force Hyper and are rejected in a Real context such as a
digits query.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


class ExprSyntaxError(ValueError):
    """Parse failure with byte offset and the set of expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} (offset {offset})"
        if expected:
            detail += "; expected " + ", ".join(expected)
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class SortError(Exception):
    """The expression is well-formed but lives in the wrong value tier."""


class VarOutsideDerive(SortError):
    """`x` used outside a derivative body."""


# -- tokens -------------------------------------------------------------------

_KEYWORDS = ("sqrt", "dx", "omega", "x", "st", "classify")
_SYMBOLS = "+-*/^()"


class TokenKind(enum.Enum):
    INT = "int"
    NAME = "name"
    SYMBOL = "symbol"
    ERROR = "error"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    """Longest-match lexing; unknown characters become error tokens."""
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "0123456789":
            start = pos
            while pos < len(text) and text[pos] in "0123456789":
                pos += 1
            tokens.append(Token(TokenKind.INT, text[start:pos], start))
            continue
        if ch == "_" or (ch.isascii() and ch.isalpha()):
            start = pos
            while pos < len(text) and (
                text[pos] == "_"
                or (text[pos].isascii() and (text[pos].isalpha() or text[pos].isdigit()))
            ):
                pos += 1
            tokens.append(Token(TokenKind.NAME, text[start:pos], start))
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(TokenKind.SYMBOL, ch, pos))
            pos += 1
            continue
        tokens.append(Token(TokenKind.ERROR, ch, pos))
        pos += 1
    tokens.append(Token(TokenKind.EOF, "", len(text)))
    return tokens


# -- syntax trees -------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class RatLit:
    value: Fraction


@dataclass(frozen=True)
class SqrtInt:
    k: int


@dataclass(frozen=True)
class Dx:
    pass


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class St:
    inner: object


@dataclass(frozen=True)
class Classify:
    inner: object


_ATOM_EXPECTED = ("integer", "'sqrt'", "'dx'", "'omega'", "'x'", "'st'", "'classify'", "'('")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        tok = self.current
        if tok.kind is TokenKind.ERROR:
            raise ExprSyntaxError(
                f"unknown character {tok.text!r}", tok.offset, expected
            )
        shown = tok.text or tok.kind.value
        raise ExprSyntaxError(f"unexpected {shown!r}", tok.offset, expected)

    def match_symbol(self, *symbols: str) -> Optional[Token]:
        tok = self.current
        if tok.kind is TokenKind.SYMBOL and tok.text in symbols:
            return self.advance()
        return None

    def expect_symbol(self, symbol: str):
        if not self.match_symbol(symbol):
            self.fail((f"'{symbol}'",))

    def expect_int(self) -> int:
        tok = self.current
        if tok.kind is not TokenKind.INT:
            self.fail(("integer",))
        self.advance()
        return int(tok.text)

    def expr(self):
        node = self.term()
        while (op := self.match_symbol("+", "-")) is not None:
            right = self.term()
            node = Add(node, right) if op.text == "+" else Sub(node, right)
        return node

    def term(self):
        node = self.factor()
        while (op := self.match_symbol("*", "/")) is not None:
            right = self.factor()
            node = Mul(node, right) if op.text == "*" else Div(node, right)
        return node

    def factor(self):
        node = self.atom()
        if self.match_symbol("^"):
            exponent = self.expect_int()
            node = Pow(node, exponent)
        return node

    def atom(self):
        tok = self.current
        if tok.kind is TokenKind.INT:
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind is TokenKind.NAME:
            if tok.text == "sqrt":
                self.advance()
                self.expect_symbol("(")
                k = self.expect_int()
                self.expect_symbol(")")
                return SqrtInt(k)
            if tok.text == "dx":
                self.advance()
                return Dx()
            if tok.text == "omega":
                self.advance()
                return Omega()
            if tok.text == "x":
                self.advance()
                return Var()
            if tok.text in ("st", "classify"):
                self.advance()
                self.expect_symbol("(")
                inner = self.expr()
                self.expect_symbol(")")
                return St(inner) if tok.text == "st" else Classify(inner)
            self.fail(_ATOM_EXPECTED)
        if tok.kind is TokenKind.SYMBOL and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect_symbol(")")
            return inner
        self.fail(_ATOM_EXPECTED)


def parse_tokens(tokens: list[Token]):
    parser = _Parser(tokens)
    node = parser.expr()
    if parser.current.kind is not TokenKind.EOF:
        parser.fail(("operator", "end of input"))
    return node


def fold_constants(node):
    """Fold integer-literal quotients into rational literals.

    A zero denominator is left unfolded so that evaluation reports it in the
    value tier where it occurs.
    """
    if isinstance(node, (Add, Sub, Mul, Div)):
        left, right = fold_constants(node.left), fold_constants(node.right)
        if (
            isinstance(node, Div)
            and isinstance(left, IntLit)
            and isinstance(right, IntLit)
            and right.value != 0
        ):
            return RatLit(Fraction(left.value, right.value))
        return type(node)(left, right)
    if isinstance(node, Pow):
        return Pow(fold_constants(node.base), node.exponent)
    if isinstance(node, St):
        return St(fold_constants(node.inner))
    if isinstance(node, Classify):
        return Classify(fold_constants(node.inner))
    return node


def parse(text: str):
    """Tokenize, parse and fold an expression."""
    return fold_constants(parse_tokens(tokenize(text)))


# -- sorts --------------------------------------------------------------------


class Context(enum.Enum):
    REAL = "real"
    HYPER = "hyper"
    DERIVE = "derive"


class Sort(enum.Enum):
    REAL = "Real"
    HYPER = "Hyper"
    POLY = "Poly"


def typecheck(node, ctx: Context, _root: bool = True) -> Sort:
    """Sort of the expression in the given context, or a SortError.

    `classify(...)` is a reporting form: it is accepted only as the outermost
    node of a hyperreal query.
    """
    if isinstance(node, (IntLit, RatLit)):
        return Sort.POLY if ctx is Context.DERIVE else Sort.REAL
    if isinstance(node, SqrtInt):
        if ctx is Context.REAL:
            return Sort.REAL
        if ctx is Context.HYPER:
            root = _exact_int_sqrt(node.k)
            if root is None:
                raise SortError(
                    f"sqrt({node.k}) is irrational and has no exact "
                    "rational-slope form; use a real-context query"
                )
            return Sort.REAL
        raise SortError("sqrt(...) is not allowed in a derivative body")
    if isinstance(node, Dx):
        if ctx is not Context.HYPER:
            raise SortError("dx only exists in the hyperreal context")
        return Sort.HYPER
    if isinstance(node, Omega):
        if ctx is not Context.HYPER:
            raise SortError("omega only exists in the hyperreal context")
        return Sort.HYPER
    if isinstance(node, Var):
        if ctx is not Context.DERIVE:
            raise VarOutsideDerive("x is only meaningful in a derivative body")
        return Sort.POLY
    if isinstance(node, (Add, Sub, Mul, Div)):
        left = typecheck(node.left, ctx, False)
        right = typecheck(node.right, ctx, False)
        if Sort.POLY in (left, right):
            return Sort.POLY
        if Sort.HYPER in (left, right):
            return Sort.HYPER
        return Sort.REAL
    if isinstance(node, Pow):
        return typecheck(node.base, ctx, False)
    if isinstance(node, St):
        if ctx is Context.DERIVE:
            raise SortError("st(...) is not allowed in a derivative body")
        typecheck(node.inner, ctx, False)
        return Sort.REAL
    if isinstance(node, Classify):
        if ctx is not Context.HYPER or not _root:
            raise SortError(
                "classify(...) is only allowed as the outermost hyperreal query"
            )
        typecheck(node.inner, ctx, False)
        return Sort.HYPER
    raise TypeError(f"unknown node {type(node).__name__}")


def _exact_int_sqrt(k: int) -> Optional[int]:
    from math import isqrt

    r = isqrt(k)
    return r if r * r == k else None


# -- formatting ---------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _fmt(node) -> tuple[str, int]:
    if isinstance(node, IntLit):
        return str(node.value), _PREC_ATOM
    if isinstance(node, RatLit):
        return f"{node.value.numerator}/{node.value.denominator}", _PREC_MUL
    if isinstance(node, SqrtInt):
        return f"sqrt({node.k})", _PREC_ATOM
    if isinstance(node, Dx):
        return "dx", _PREC_ATOM
    if isinstance(node, Omega):
        return "omega", _PREC_ATOM
    if isinstance(node, Var):
        return "x", _PREC_ATOM
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        ls, lp = _fmt(node.left)
        rs, rp = _fmt(node.right)
        if lp < _PREC_ADD:
            ls = f"({ls})"
        if rp <= _PREC_ADD:
            rs = f"({rs})"
        return f"{ls} {op} {rs}", _PREC_ADD
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        ls, lp = _fmt(node.left)
        rs, rp = _fmt(node.right)
        if lp < _PREC_MUL:
            ls = f"({ls})"
        if rp <= _PREC_MUL:
            rs = f"({rs})"
        return f"{ls}{op}{rs}", _PREC_MUL
    if isinstance(node, Pow):
        bs, bp = _fmt(node.base)
        if bp < _PREC_ATOM:
            bs = f"({bs})"
        return f"{bs}^{node.exponent}", _PREC_POW
    if isinstance(node, St):
        return f"st({_fmt(node.inner)[0]})", _PREC_ATOM
    if isinstance(node, Classify):
        return f"classify({_fmt(node.inner)[0]})", _PREC_ATOM
    raise TypeError(f"unknown node {type(node).__name__}")


def format_ast(node) -> str:
    """Render a tree so that parsing the result reproduces it."""
    return _fmt(node)[0]
