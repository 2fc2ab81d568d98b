"""Command-line front end binding the library together.

Commands: `digits` (decimal rendering of exact reals), `hyper eval`
(classification, standard part and leading term of a germ), `derive` (exact
derivative of a rational function at a rational point), `ultra` (persistent
ultrafilter sessions over eventually periodic sets), `lup check`
(admissibility under a partition-generated filter), `selftest`.

Exit codes: 0 success, 1 usage or parse error, 2 budget exhaustion,
3 domain or sort error. Output is deterministic: the same invocation against
the same state file produces byte-identical output. `--json` switches every
command to a stable envelope {command, result, diagnostics, budget_used}.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import random
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import ahom, calculus, expr, hyper, indexset, lup, reals, ufsim
from .ahom import (
    CertificateError,
    Compose,
    FloorLinear,
    FloorSqrt,
    IntScale,
    Neg,
    RuleSyntaxError,
    Sum,
    format_rule,
    parse_rule,
    verify_bound,
)
from .calculus import RatFunction, SubstitutionPole, derivative_at
from .expr import (
    Context,
    ExprSyntaxError,
    Sort,
    SortError,
    typecheck,
)
from .hyper import (
    DivisionByZeroGerm,
    InfiniteElement,
    PoleAtIndex,
    RationalSlopeGerm,
)
from .indexset import IndexSetSyntaxError
from .lup import LimitFilterSpec, Partition, PartitionError, UndecidableWithinBudget
from .reals import EudoxusReal, UndecidedSign, decimal_of_fraction
from .ufsim import TraceError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_DOMAIN = 3


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    budget: int = 2**20
    default_precision: int = 10
    max_k: int = 40
    state_path: str = "ultra.trace"


_INT_KEYS = ("budget", "default_precision", "max_k")
_CONFIG_KEYS = _INT_KEYS + ("state_path",)


def load_config(path: str | None, env=None) -> Config:
    """Config file `key = value` with `#` comments; env vars override the
    file; command-line flags override both (applied by the handlers)."""
    cfg = Config()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_no}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            _set_config_key(cfg, key, value, f"line {line_no}")
    if env is None:
        env = os.environ
    for key in _CONFIG_KEYS:
        var = "EUDOXUS_" + key.upper()
        if var in env:
            _set_config_key(cfg, key, env[var], var)
    return cfg


def _set_config_key(cfg: Config, key: str, value: str, where: str) -> None:
    if key not in _CONFIG_KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    if key in _INT_KEYS:
        try:
            number = int(value)
        except ValueError:
            raise ConfigError(f"{where}: {key} must be an integer") from None
        if number < 1:
            raise ConfigError(f"{where}: {key} must be positive")
        setattr(cfg, key, number)
    else:
        setattr(cfg, key, value)


# -- expression evaluation ----------------------------------------------------


def eval_real(node, budget: int) -> EudoxusReal:
    if isinstance(node, expr.IntLit):
        return reals.from_rational(node.value, 1)
    if isinstance(node, expr.RatLit):
        return reals.from_rational(node.value.numerator, node.value.denominator)
    if isinstance(node, expr.SqrtInt):
        return reals.from_sqrt_int(node.k)
    if isinstance(node, expr.Add):
        return eval_real(node.left, budget).add(eval_real(node.right, budget))
    if isinstance(node, expr.Sub):
        return eval_real(node.left, budget).sub(eval_real(node.right, budget))
    if isinstance(node, expr.Mul):
        return eval_real(node.left, budget).mul(eval_real(node.right, budget))
    if isinstance(node, expr.Div):
        right = eval_real(node.right, budget)
        return eval_real(node.left, budget).mul(right.recip(budget))
    if isinstance(node, expr.Pow):
        base = eval_real(node.base, budget)
        out = reals.one()
        for _ in range(node.exponent):
            out = out.mul(base)
        return out
    if isinstance(node, expr.St):
        # st is the identity on embedded reals.
        return eval_real(node.inner, budget)
    raise SortError(f"{type(node).__name__} has no exact real value")


def eval_germ(node) -> RationalSlopeGerm:
    if isinstance(node, expr.IntLit):
        return hyper.from_real(node.value)
    if isinstance(node, expr.RatLit):
        return hyper.from_real(node.value)
    if isinstance(node, expr.SqrtInt):
        root = isqrt(node.k)
        if root * root != node.k:
            raise SortError(f"sqrt({node.k}) has no exact rational-slope form")
        return hyper.from_real(root)
    if isinstance(node, expr.Dx):
        return hyper.dx()
    if isinstance(node, expr.Omega):
        return hyper.omega()
    if isinstance(node, expr.Add):
        return hyper.add(eval_germ(node.left), eval_germ(node.right))
    if isinstance(node, expr.Sub):
        return hyper.sub(eval_germ(node.left), eval_germ(node.right))
    if isinstance(node, expr.Mul):
        return hyper.mul(eval_germ(node.left), eval_germ(node.right))
    if isinstance(node, expr.Div):
        return hyper.div(eval_germ(node.left), eval_germ(node.right))
    if isinstance(node, expr.Pow):
        return hyper.pow_(eval_germ(node.base), node.exponent)
    if isinstance(node, expr.St):
        return hyper.from_real(hyper.standard_part(eval_germ(node.inner)))
    if isinstance(node, expr.Classify):
        return eval_germ(node.inner)
    raise SortError(f"{type(node).__name__} has no germ value")


def eval_ratfn(node) -> RatFunction:
    if isinstance(node, expr.IntLit):
        return calculus.constant(node.value)
    if isinstance(node, expr.RatLit):
        return calculus.constant(node.value)
    if isinstance(node, expr.Var):
        return calculus.variable()
    if isinstance(node, expr.Add):
        return eval_ratfn(node.left) + eval_ratfn(node.right)
    if isinstance(node, expr.Sub):
        return eval_ratfn(node.left) - eval_ratfn(node.right)
    if isinstance(node, expr.Mul):
        return eval_ratfn(node.left) * eval_ratfn(node.right)
    if isinstance(node, expr.Div):
        return eval_ratfn(node.left) / eval_ratfn(node.right)
    if isinstance(node, expr.Pow):
        return eval_ratfn(node.base).pow(node.exponent)
    raise SortError(f"{type(node).__name__} has no polynomial value")


# -- output -------------------------------------------------------------------


def _emit(args, command: str, result, lines, budget_used: int) -> None:
    if getattr(args, "json", False):
        envelope = {
            "command": command,
            "result": result,
            "diagnostics": [],
            "budget_used": budget_used,
        }
        print(json.dumps(envelope, sort_keys=True))
    else:
        for line in lines:
            print(line)


# -- command handlers ----------------------------------------------------------


def cmd_digits(args, cfg: Config) -> int:
    precision = args.precision if args.precision is not None else cfg.default_precision
    if precision < 1:
        raise ConfigError("precision must be positive")
    budget = args.budget if args.budget is not None else cfg.budget
    tree = expr.parse(args.expr)
    typecheck(tree, Context.REAL)
    value = eval_real(tree, budget)
    rendered = value.to_decimal(precision)
    index_used = 2 * value.rep.bound * 10 ** (precision + 2)
    _emit(
        args,
        "digits",
        {"value": rendered, "precision": precision},
        [rendered],
        index_used,
    )
    return EXIT_OK


def cmd_hyper_eval(args, cfg: Config) -> int:
    tree = expr.parse(args.expr)
    typecheck(tree, Context.HYPER)
    value = eval_germ(tree)
    cls = hyper.classify(value)
    lines = [f"class: {cls.kind.value}"]
    st_text = None
    if cls.st is not None:
        st_text = str(cls.st)
        lines.append(f"st: {st_text}")
    leading = hyper.format_leading_term(value)
    germ_text = hyper.format_germ(value)
    lines.append(f"leading: {leading}")
    lines.append(f"germ: {germ_text}")
    _emit(
        args,
        "hyper eval",
        {
            "class": cls.kind.value,
            "st": st_text,
            "leading": leading,
            "germ": germ_text,
        },
        lines,
        0,
    )
    return EXIT_OK


def cmd_derive(args, cfg: Config) -> int:
    tree = expr.parse(args.poly)
    sort = typecheck(tree, Context.DERIVE)
    if sort is not Sort.POLY:
        raise SortError("derivative body must mention the variable sort")
    fn = eval_ratfn(tree)
    result = derivative_at(fn, args.at)
    exact = str(result)
    decimal = decimal_of_fraction(result, cfg.default_precision)
    _emit(
        args,
        "derive",
        {"exact": exact, "decimal": decimal, "at": str(Fraction(args.at))},
        [exact, decimal],
        0,
    )
    return EXIT_OK


def _state_path(args, cfg: Config) -> str:
    return args.state if args.state is not None else cfg.state_path


def _load_state(path: str) -> ufsim.FilterState:
    if not os.path.exists(path):
        return ufsim.fresh_state()
    with open(path, "r", encoding="utf-8") as fh:
        return ufsim.import_trace(fh.read())


@contextmanager
def _locked(path: str):
    lock_path = path + ".lock"
    with open(lock_path, "w") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def cmd_ultra_query(args, cfg: Config) -> int:
    s = indexset.parse(args.setspec)
    path = _state_path(args, cfg)
    with _locked(path):
        state = _load_state(path)
        verdict, state = ufsim.query(state, s)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(ufsim.export_trace(state))
    _emit(
        args,
        "ultra query",
        {"verdict": verdict.value, "set": indexset.format_set(s)},
        [verdict.value],
        0,
    )
    return EXIT_OK


def cmd_ultra_contains(args, cfg: Config) -> int:
    s = indexset.parse(args.setspec)
    state = _load_state(_state_path(args, cfg))
    answer = ufsim.contains(state, s)
    _emit(
        args,
        "ultra contains",
        {"containment": answer.value, "set": indexset.format_set(s)},
        [answer.value],
        0,
    )
    return EXIT_OK


def cmd_ultra_trace(args, cfg: Config) -> int:
    state = _load_state(_state_path(args, cfg))
    text = ufsim.export_trace(state)
    lines = text.splitlines()
    _emit(args, "ultra trace", {"entries": lines}, lines, 0)
    return EXIT_OK


def _parse_partition(spec: str) -> Partition:
    chunks = re.split(r";\s*(?=pre:)", spec.strip())
    classes = tuple(indexset.parse(chunk.strip()) for chunk in chunks)
    return Partition(classes)


def cmd_lup_check(args, cfg: Config) -> int:
    tree = expr.parse(args.expr)
    typecheck(tree, Context.HYPER)
    value = eval_germ(tree)
    partition = _parse_partition(args.partition)
    admissible = lup.is_admissible(value, LimitFilterSpec((partition,)))
    text = "admissible" if admissible else "not admissible"
    _emit(
        args,
        "lup check",
        {"admissible": admissible, "classes": len(partition.classes)},
        [text],
        0,
    )
    return EXIT_OK


# -- selftest -------------------------------------------------------------------


def _suite_kernel(rng: random.Random):
    checks = 0
    failures = []
    nodes = [
        FloorLinear(3, 7),
        FloorLinear(-22, 7),
        FloorSqrt(2),
        FloorSqrt(10),
        Sum(FloorLinear(1, 2), FloorSqrt(3)),
        Neg(FloorSqrt(5)),
        IntScale(-4, FloorLinear(2, 3)),
        Compose(FloorSqrt(2), FloorSqrt(2)),
        Compose(FloorLinear(5, 3), FloorSqrt(7)),
    ]
    for _ in range(4):
        nodes.append(FloorLinear(rng.randint(-20, 20), rng.randint(1, 20)))
    for f in nodes:
        checks += 1
        if not verify_bound(f, 30).ok:
            failures.append(f"certificate violated for {format_rule(f)}")
        checks += 1
        if parse_rule(format_rule(f)) != f:
            failures.append(f"serialization round trip failed for {format_rule(f)}")
    lin = FloorLinear(3, 5)
    for p in range(-25, 26):
        for q in range(-25, 26):
            checks += 1
            if ahom.discrepancy(lin, p, q) not in (0, 1):
                failures.append(f"floor-sum identity failed at ({p}, {q})")
    root = FloorSqrt(7)
    for a in range(-50, 51):
        checks += 1
        if root.eval(-a) != -root.eval(a):
            failures.append(f"odd symmetry failed at {a}")
    return checks, failures


def _suite_reals(rng: random.Random, max_k: int = 40):
    checks = 0
    failures = []

    def sample() -> EudoxusReal:
        if rng.random() < 0.5:
            return reals.from_rational(rng.randint(-50, 50), rng.randint(1, 50))
        return reals.from_sqrt_int(rng.randint(0, 20))

    for _ in range(15):
        x, y, z = sample(), sample(), sample()
        checks += 3
        if not x.add(y).add(z).equals_within(x.add(y.add(z)), 64):
            failures.append("associativity of addition failed")
        if not x.mul(y).equals_within(y.mul(x), 64):
            failures.append("commutativity of multiplication failed")
        lhs = x.mul(y.add(z))
        rhs = x.mul(y).add(x.mul(z))
        if not lhs.equals_within(rhs, 64):
            failures.append("distributivity failed")
    for _ in range(15):
        a = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        b = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        fa = reals.from_rational(a.numerator, a.denominator)
        fb = reals.from_rational(b.numerator, b.denominator)
        total = a + b
        prod = a * b
        checks += 2
        if not fa.add(fb).equals_within(
            reals.from_rational(total.numerator, total.denominator), 64
        ):
            failures.append("embedding does not preserve addition")
        if not fa.mul(fb).equals_within(
            reals.from_rational(prod.numerator, prod.denominator), 64
        ):
            failures.append("embedding does not preserve multiplication")
    checks += 1
    two = reals.from_sqrt_int(2)
    if not two.mul(two).equals_within(reals.from_rational(2, 1), 128):
        failures.append("sqrt(2)^2 is not 2 within certified bounds")
    checks += 1
    if reals.from_rational(1, 4).to_decimal(3) != "0.250":
        failures.append("decimal rendering of 1/4 failed")
    depth = min(16, max_k)
    for _ in range(10):
        p, q = rng.randint(-40, 40), rng.randint(1, 40)
        x = reals.from_rational(p, q)
        checks += 1
        if abs(x.slope_approx(depth) - Fraction(p, q)) > Fraction(
            x.rep.bound, 2**depth
        ):
            failures.append("slope error bound violated")
    return checks, failures


def _suite_indexsets(rng: random.Random):
    checks = 0
    failures = []

    def sample() -> indexset.IndexSet:
        pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 5)))
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
        return indexset.IndexSet(pre, per)

    for _ in range(150):
        s, t = sample(), sample()
        checks += 3
        lhs = indexset.complement(indexset.union(s, t))
        rhs = indexset.intersect(indexset.complement(s), indexset.complement(t))
        if lhs != rhs:
            failures.append("De Morgan law failed")
        if indexset.complement(indexset.complement(s)) != s:
            failures.append("double complement failed")
        window = 4 * len(s.period) * len(t.period) + len(s.pre) + len(t.pre) + 8
        hit = indexset.intersect(s, t)
        if any(hit.member(n) != (s.member(n) and t.member(n)) for n in range(window)):
            failures.append("pointwise intersection mismatch")
    checks += 1
    if indexset.parse("pre:;per:10") != indexset.evens():
        failures.append("parse of evens failed")
    return checks, failures


def _suite_ultrafilter(rng: random.Random):
    checks = 0
    failures = []
    state = ufsim.fresh_state()
    for _ in range(300):
        pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
        s = indexset.IndexSet(pre, per)
        verdict, state = ufsim.query(state, s)
        checks += 1
        if not state.meet.is_infinite():
            failures.append("meet became finite")
        if s.is_cofinite() and verdict is not ufsim.Verdict.ACCEPTED:
            failures.append("cofinite set rejected")
        if s.is_finite() and verdict is not ufsim.Verdict.REJECTED:
            failures.append("finite set accepted")
    checks += 1
    verdict, state = ufsim.query(state, indexset.singleton(17))
    if verdict is not ufsim.Verdict.REJECTED:
        failures.append("singleton accepted")
    checks += 1
    if ufsim.import_trace(ufsim.export_trace(state)) != state:
        failures.append("trace round trip failed")
    return checks, failures


def _suite_germs(rng: random.Random):
    checks = 0
    failures = []

    def sample() -> RationalSlopeGerm:
        num = tuple(rng.randint(-9, 9) for _ in range(rng.randint(1, 4)))
        den = tuple(rng.randint(-9, 9) for _ in range(rng.randint(1, 4)))
        if not any(den):
            den = (1,)
        return RationalSlopeGerm(num, den)

    for _ in range(60):
        x, y, z = sample(), sample(), sample()
        checks += 2
        if (x + y) + z != x + (y + z):
            failures.append("germ associativity failed")
        if x * (y + z) != x * y + x * z:
            failures.append("germ distributivity failed")
    d = hyper.dx()
    checks += 3
    if hyper.classify(d).kind is not hyper.HyperKind.POSITIVE_INFINITESIMAL:
        failures.append("dx not classified as a positive infinitesimal")
    if hyper.compare(d, d * d) is not hyper.Order.GREATER:
        failures.append("dx vs dx^2 ordering failed")
    if d * hyper.omega() != hyper.from_real(1):
        failures.append("dx * omega is not 1")
    return checks, failures


def _suite_derivatives(rng: random.Random):
    checks = 0
    failures = []
    cases = [
        (calculus.from_coeffs((0, 0, 1)), Fraction(3), Fraction(6)),
        (calculus.from_coeffs((0, -2, 0, 1)), Fraction(2), Fraction(10)),
        (calculus.constant(5), Fraction(1), Fraction(0)),
        (
            calculus.constant(1) / calculus.variable(),
            Fraction(2),
            Fraction(-1, 4),
        ),
    ]
    for fn, at, expected in cases:
        checks += 1
        if derivative_at(fn, at) != expected:
            failures.append(f"derivative of {fn} at {at} incorrect")
    for _ in range(10):
        coeffs_f = [Fraction(rng.randint(-5, 5)) for _ in range(4)]
        coeffs_g = [Fraction(rng.randint(-5, 5)) for _ in range(4)]
        f = calculus.from_coeffs(tuple(coeffs_f))
        g = calculus.from_coeffs(tuple(coeffs_g))
        at = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        checks += 1
        lhs = derivative_at(f * g, at)
        rhs = f(at) * derivative_at(g, at) + derivative_at(f, at) * g(at)
        if lhs != rhs:
            failures.append("product rule failed")
    return checks, failures


def _suite_admissibility(rng: random.Random):
    checks = 0
    failures = []
    half = Partition((indexset.evens(), indexset.odds()))
    spec = LimitFilterSpec((half,))
    checks += 2
    if not lup.is_admissible(hyper.from_real(7), spec):
        failures.append("constant germ not admissible")
    if lup.is_admissible(hyper.dx(), spec):
        failures.append("dx admissible for a finite partition")
    values = [reals.from_sqrt_int(k) for k in (2, 3, 5)]
    elements = [
        hyper.piecewise(
            ((indexset.evens(), rng.choice(values)), (indexset.odds(), rng.choice(values)))
        )
        for _ in range(6)
    ]
    report = lup.restricted_closure_check(elements, spec)
    checks += 1
    if not report.ok:
        failures.append("closure check failed")
    return checks, failures


def _suite_parser(rng: random.Random):
    checks = 0
    failures = []
    alphabet = "0123456789+-*/^()sqrtdxomegastclassify @#"
    for _ in range(200):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 20)))
        checks += 1
        try:
            expr.parse(text)
        except ExprSyntaxError as exc:
            if exc.offset > len(text):
                failures.append("error offset past end of input")
        except Exception as exc:  # noqa: BLE001 - the point of the fuzz
            failures.append(f"parser raised {type(exc).__name__} on {text!r}")
    sample = "st((1 + dx)^2) * 3 - 22/7"
    checks += 1
    tree = expr.parse(sample)
    if expr.parse(expr.format_ast(tree)) != tree:
        failures.append("format/parse round trip failed")
    return checks, failures


_SUITES = (
    ("kernel-certificates", _suite_kernel),
    ("real-field", _suite_reals),
    ("index-sets", _suite_indexsets),
    ("ultrafilter", _suite_ultrafilter),
    ("germ-field", _suite_germs),
    ("derivatives", _suite_derivatives),
    ("admissibility", _suite_admissibility),
    ("parser", _suite_parser),
)


def cmd_selftest(args, cfg: Config) -> int:
    rng = random.Random(20250801)
    total_checks = 0
    total_failures = 0
    lines = []
    suites_json = []
    for name, suite in _SUITES:
        if suite is _suite_reals:
            checks, failures = suite(rng, cfg.max_k)
        else:
            checks, failures = suite(rng)
        total_checks += checks
        total_failures += len(failures)
        status = "PASS" if not failures else "FAIL"
        lines.append(f"{name}: {status} ({checks} checks)")
        for failure in failures:
            lines.append(f"  - {failure}")
        suites_json.append(
            {"name": name, "status": status, "checks": checks, "failures": failures}
        )
    lines.append(
        f"selftest: {len(_SUITES)} suites, {total_checks} checks, "
        f"{total_failures} failures"
    )
    _emit(
        args,
        "selftest",
        {
            "suites": suites_json,
            "checks": total_checks,
            "failures": total_failures,
        },
        lines,
        0,
    )
    return EXIT_OK if total_failures == 0 else EXIT_USAGE


# -- argument parsing -----------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--config", metavar="FILE", help="configuration file")
    common.add_argument("--budget", type=int, help="sign-decision budget")
    common.add_argument("--state", metavar="FILE", help="ultrafilter state file")

    parser = _ArgumentParser(
        prog="eudoxus",
        description="Exact real and infinitesimal arithmetic from integer maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_digits = sub.add_parser("digits", parents=[common], help="decimal rendering")
    p_digits.add_argument("expr")
    p_digits.add_argument("-p", "--precision", type=int, default=None)
    p_digits.set_defaults(func=cmd_digits)

    p_hyper = sub.add_parser("hyper", help="hyperreal germ queries")
    hyper_sub = p_hyper.add_subparsers(dest="hyper_command", required=True)
    p_hyper_eval = hyper_sub.add_parser("eval", parents=[common])
    p_hyper_eval.add_argument("expr")
    p_hyper_eval.set_defaults(func=cmd_hyper_eval)

    p_derive = sub.add_parser("derive", parents=[common], help="exact derivative")
    p_derive.add_argument("poly")
    p_derive.add_argument("--at", type=Fraction, required=True)
    p_derive.set_defaults(func=cmd_derive)

    p_ultra = sub.add_parser("ultra", help="ultrafilter sessions")
    ultra_sub = p_ultra.add_subparsers(dest="ultra_command", required=True)
    p_query = ultra_sub.add_parser("query", parents=[common])
    p_query.add_argument("setspec")
    p_query.set_defaults(func=cmd_ultra_query)
    p_contains = ultra_sub.add_parser("contains", parents=[common])
    p_contains.add_argument("setspec")
    p_contains.set_defaults(func=cmd_ultra_contains)
    p_trace = ultra_sub.add_parser("trace", parents=[common])
    p_trace.set_defaults(func=cmd_ultra_trace)

    p_lup = sub.add_parser("lup", help="limit-filter admissibility")
    lup_sub = p_lup.add_subparsers(dest="lup_command", required=True)
    p_check = lup_sub.add_parser("check", parents=[common])
    p_check.add_argument("expr")
    p_check.add_argument("--partition", required=True)
    p_check.set_defaults(func=cmd_lup_check)

    p_selftest = sub.add_parser("selftest", parents=[common], help="invariant suites")
    p_selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = load_config(getattr(args, "config", None))
        if getattr(args, "budget", None) is not None:
            if args.budget < 1:
                raise ConfigError("budget must be positive")
            cfg.budget = args.budget
        return args.func(args, cfg)
    except (
        ExprSyntaxError,
        IndexSetSyntaxError,
        RuleSyntaxError,
        PartitionError,
        ConfigError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndecidedSign as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        SortError,
        DivisionByZeroGerm,
        PoleAtIndex,
        InfiniteElement,
        SubstitutionPole,
        TraceError,
        UndecidableWithinBudget,
        CertificateError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
