"""Coordinate-function expressions.

Grammar (whitespace is insignificant, identifiers are ASCII)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | "t" | IDENT | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := "sin" | "cos" | "sinh" | "cosh" | "exp" | "log" | "sqrt"

``^`` binds tighter than unary minus and is right-associative, so
``-2^2 == -4`` and ``2^3^2 == 512``.  Implicit multiplication (``2t``) is a
syntax error.

The same tree is evaluated either over floats (:func:`eval_scalar`) or over
:class:`~galicurve.numerics.Jet3` (:func:`eval_jet`).  Both walks go through
one evaluator parameterised by an arithmetic backend, so the value slot of
the jet is bit-identical to the scalar result.
"""

from __future__ import annotations

import math
import re
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivisionByZero,
    DomainError,
    ExprSyntaxError,
    UnboundConstantError,
    UnknownFunctionError,
)
from .numerics import (
    Jet3,
    integrate_adaptive,
    jet_add,
    jet_div,
    jet_elementary,
    jet_mul,
    jet_neg,
    jet_sub,
)

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "sqrt")
VARIABLE = "t"
DEFAULT_CONSTANTS = {"pi": math.pi}

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Name",
    "Neg",
    "Call",
    "BinOp",
    "TwiceIntegrated",
    "parse",
    "to_source",
    "eval_scalar",
    "eval_jet",
    "validate_bindings",
    "free_names",
]


class Expr:
    """Base class of expression tree nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_source(self)

    # Building helpers used by transform code; they never simplify.
    def __add__(self, other: Expr) -> Expr:
        return BinOp("+", self, _as_expr(other))

    def __radd__(self, other) -> Expr:
        return BinOp("+", _as_expr(other), self)

    def __sub__(self, other: Expr) -> Expr:
        return BinOp("-", self, _as_expr(other))

    def __mul__(self, other: Expr) -> Expr:
        return BinOp("*", self, _as_expr(other))

    def __rmul__(self, other) -> Expr:
        return BinOp("*", _as_expr(other), self)

    def __neg__(self) -> Expr:
        return Neg(self)


def _as_expr(x) -> Expr:
    return x if isinstance(x, Expr) else Const(float(x))


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    arg: Expr


@dataclass(frozen=True, slots=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # num, ident, op, end
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    # byte offsets are reported; only differ from char offsets on non-ASCII input
    byte_at = lambda i: len(src[:i].encode("utf-8"))  # noqa: E731
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {src[pos]!r}", byte_at(pos),
                "number, identifier, operator or parenthesis", src,
            )
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), byte_at(pos)))
        pos = m.end()
    tokens.append(_Token("end", "", len(src.encode("utf-8"))))
    return tokens


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.text)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        raise ExprSyntaxError(f"unexpected {_describe(self.tok)}", self.tok.offset, expected, self.src)

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.at_op("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.at_op("^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.at_op("("):
                if tok.text not in FUNCTIONS:
                    raise UnknownFunctionError(tok.text, tok.offset)
                self.advance()
                arg = self.expr()
                self.expect_close()
                return Call(tok.text, arg)
            if tok.text in FUNCTIONS:
                self.fail("'(' after function name")
            if tok.text == VARIABLE:
                return Var()
            return Name(tok.text)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_close()
            return node
        self.fail("number, identifier or '('")

    def expect_close(self):
        if not self.at_op(")"):
            self.fail("')'")
        self.advance()


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree.

    Raises:
        ExprSyntaxError: malformed input; carries the byte offset.
        UnknownFunctionError: a call to a name outside ``FUNCTIONS``.
    """
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, "expression", src or "")
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# pretty printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_PREC_NEG = 3
_PREC_ATOM = 5


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Const) and (node.value < 0 or math.copysign(1.0, node.value) < 0):
        return _PREC_NEG
    return _PREC_ATOM


def _fmt_number(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot print non-finite constant {x!r}")
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x)) if x != 0 or math.copysign(1.0, x) > 0 else "-0"
    return repr(x)


def to_source(node: Expr) -> str:
    """Render ``node`` with the minimal parentheses that preserve its shape."""
    if isinstance(node, Const):
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return VARIABLE
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.child, _prec(node.child) < _PREC_NEG)
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        if node.op == "^":
            left = _wrap(node.left, _prec(node.left) <= p)
            right = _wrap(node.right, _prec(node.right) < _PREC_NEG)
            return f"{left}^{right}"
        left = _wrap(node.left, _prec(node.left) < p)
        right = _wrap(node.right, _prec(node.right) <= p)
        return f"{left} {node.op} {right}"
    raise TypeError(f"{type(node).__name__} has no source form")


def _wrap(node: Expr, paren: bool) -> str:
    s = to_source(node)
    return f"({s})" if paren else s


def free_names(node: Expr) -> set[str]:
    """Named constants referenced by ``node``."""
    if isinstance(node, Name):
        return {node.ident}
    if isinstance(node, Neg):
        return free_names(node.child)
    if isinstance(node, Call):
        return free_names(node.arg)
    if isinstance(node, BinOp):
        return free_names(node.left) | free_names(node.right)
    return set()


def validate_bindings(bindings: Mapping[str, float] | None) -> dict[str, float]:
    out = {}
    for key, value in (bindings or {}).items():
        if not isinstance(key, str) or not key or not key[0].isascii() or not key[0].isalpha():
            raise ValueError(f"invalid constant name {key!r}")
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", key):
            raise ValueError(f"invalid constant name {key!r}")
        if key == VARIABLE or key in FUNCTIONS:
            raise ValueError(f"{key!r} is reserved")
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"constant {key!r} must be finite")
        out[key] = value
    return out


# ---------------------------------------------------------------------------
# evaluation

class _ScalarOps:
    def const(self, c):
        return c

    def var(self, t):
        return float(t)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0.0:
            raise DivisionByZero("division by zero")
        return a / b

    def call(self, func, x):
        try:
            if func == "sqrt":
                if x < 0.0:
                    raise DomainError(f"sqrt of negative value {x!r}")
                return math.sqrt(x)
            if func == "log":
                if x <= 0.0:
                    raise DomainError(f"log of non-positive value {x!r}")
                return math.log(x)
            return getattr(math, func)(x)
        except OverflowError as exc:
            raise DomainError(f"{func} overflowed at {x!r}") from exc

    def const_pow(self, x, p):
        if x < 0.0:
            raise DomainError(f"non-integer power of negative value {x!r}")
        return x**p

    def gen_pow(self, x, y):
        if x <= 0.0:
            raise DomainError(f"general power needs a positive base, got {x!r}")
        try:
            return math.exp(y * math.log(x))
        except OverflowError as exc:
            raise DomainError("power overflowed") from exc

    def integrated(self, node, t):
        return node.scalar(t)


class _JetOps:
    def const(self, c):
        return Jet3.constant(c)

    def var(self, t):
        return Jet3.identity(t)

    add = staticmethod(jet_add)
    sub = staticmethod(jet_sub)
    mul = staticmethod(jet_mul)
    neg = staticmethod(jet_neg)

    def div(self, a, b):
        if b.v == 0.0:
            raise DivisionByZero("division by zero")
        return jet_div(a, b)

    def call(self, func, x):
        return jet_elementary(func, x)

    def const_pow(self, x, p):
        return jet_elementary("pow", x, p)

    def gen_pow(self, x, y):
        if x.v <= 0.0:
            raise DomainError(f"general power needs a positive base, got {x.v!r}")
        return jet_elementary("exp", jet_mul(y, jet_elementary("log", x)))

    def integrated(self, node, t):
        return node.jet(t)


_SCALAR = _ScalarOps()
_JET = _JetOps()


def _depends_on_t(node: Expr) -> bool:
    if isinstance(node, (Var, TwiceIntegrated)):
        return True
    if isinstance(node, Neg):
        return _depends_on_t(node.child)
    if isinstance(node, Call):
        return _depends_on_t(node.arg)
    if isinstance(node, BinOp):
        return _depends_on_t(node.left) or _depends_on_t(node.right)
    return False


def _evaluate(node: Expr, t: float, env: Mapping[str, float], ops):
    if isinstance(node, Const):
        return ops.const(node.value)
    if isinstance(node, Var):
        return ops.var(t)
    if isinstance(node, Name):
        try:
            return ops.const(env[node.ident])
        except KeyError:
            raise UnboundConstantError(node.ident) from None
    if isinstance(node, Neg):
        return ops.neg(_evaluate(node.child, t, env, ops))
    if isinstance(node, Call):
        return ops.call(node.func, _evaluate(node.arg, t, env, ops))
    if isinstance(node, BinOp):
        left = _evaluate(node.left, t, env, ops)
        if node.op == "^":
            # exponents free of t are reduced to a float first, in both backends
            p = None if _depends_on_t(node.right) else _evaluate(node.right, t, env, _SCALAR)
            if p is not None and p.is_integer():
                return _int_power(left, int(p), ops)
            if p is not None:
                return ops.const_pow(left, p)
            return ops.gen_pow(left, _evaluate(node.right, t, env, ops))
        right = _evaluate(node.right, t, env, ops)
        if node.op == "+":
            return ops.add(left, right)
        if node.op == "-":
            return ops.sub(left, right)
        if node.op == "*":
            return ops.mul(left, right)
        return ops.div(left, right)
    if isinstance(node, TwiceIntegrated):
        return ops.integrated(node, t)
    raise TypeError(f"cannot evaluate {type(node).__name__}")


def _int_power(x, n: int, ops):
    if n == 0:
        return ops.const(1.0)
    result = x
    for _ in range(abs(n) - 1):
        result = ops.mul(result, x)
    if n < 0:
        return ops.div(ops.const(1.0), result)
    return result


def _env(bindings: Mapping[str, float] | None) -> dict[str, float]:
    env = dict(DEFAULT_CONSTANTS)
    if bindings:
        env.update(bindings)
    return env


def eval_scalar(e: Expr, t: float, bindings: Mapping[str, float] | None = None) -> float:
    """Value of ``e`` at parameter ``t``."""
    return _evaluate(e, t, _env(bindings), _SCALAR)


def eval_jet(e: Expr, t0: float, bindings: Mapping[str, float] | None = None) -> Jet3:
    """Jet of ``e`` as a function of ``t`` at ``t0``."""
    return _evaluate(e, t0, _env(bindings), _JET)


# ---------------------------------------------------------------------------
# programmatic-only node

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True, eq=False)
class TwiceIntegrated(Expr):
    """Coordinate given by its second derivative in ``t``.

    Represents ``value0 + slope0*(t - origin) + int_origin^t (t - u) f(u) du``
    for an integrand expression ``f``.  The two running antiderivatives
    ``int f`` and ``int u f`` are tabulated on ``knots`` panels across
    ``span`` with :func:`integrate_adaptive`; off-knot values add a
    10-point Gauss-Legendre leg from the nearest knot.  Outside ``span`` the
    remainder is integrated adaptively.

    Never produced by :func:`parse` and has no source form.  The integrand is
    evaluated with the node's own ``constants``.
    """

    integrand: Expr
    origin: float
    value0: float
    slope0: float
    span: tuple[float, float]
    constants: tuple[tuple[str, float], ...] = ()
    tol: float = 1e-10
    knots: int = 64
    _table: tuple = field(init=False, repr=False, compare=False)
    _memo: dict = field(init=False, repr=False, compare=False)

    # a moved curve mixes y and z into both new coordinates, so the same
    # node is often asked for the same t several times in a row
    _MEMO_LIMIT = 4096

    def __post_init__(self):
        lo, hi = self.span
        if not lo < hi:
            raise ValueError("span must be increasing")
        env = _env(dict(self.constants))
        f = lambda u: _evaluate(self.integrand, u, env, _SCALAR)  # noqa: E731
        g = lambda u: u * f(u)  # noqa: E731
        xs = np.linspace(lo, hi, self.knots + 1)
        panel_tol = self.tol / self.knots
        F = np.zeros_like(xs)
        G = np.zeros_like(xs)
        for i in range(self.knots):
            F[i + 1] = F[i] + integrate_adaptive(f, xs[i], xs[i + 1], panel_tol).value
            G[i + 1] = G[i] + integrate_adaptive(g, xs[i], xs[i + 1], panel_tol).value
        object.__setattr__(self, "_table", (xs, F, G, env, f, g))
        F0, G0 = self._running(self.origin)
        object.__setattr__(self, "_table", (xs, F - F0, G - G0, env, f, g))
        object.__setattr__(self, "_memo", {})

    def _running(self, t: float) -> tuple[float, float]:
        xs, F, G, _, f, g = self._table
        lo, hi = self.span
        if t < lo or t > hi:
            k = 0 if t < lo else len(xs) - 1
            a, b = sorted((xs[k], t))
            sign = 1.0 if t >= xs[k] else -1.0
            return (
                F[k] + sign * integrate_adaptive(f, a, b, self.tol).value,
                G[k] + sign * integrate_adaptive(g, a, b, self.tol).value,
            )
        k = int(round((t - lo) / (hi - lo) * (len(xs) - 1)))
        x0 = float(xs[k])
        half = 0.5 * (t - x0)
        mid = 0.5 * (t + x0)
        fsum = gsum = 0.0
        for node, w in zip(_GL_NODES, _GL_WEIGHTS):
            u = mid + half * node
            fu = f(u)
            fsum += w * fu
            gsum += w * u * fu
        return float(F[k]) + half * fsum, float(G[k]) + half * gsum

    def _value_slope(self, t: float) -> tuple[float, float]:
        F, G = self._running(t)
        value = self.value0 + self.slope0 * (t - self.origin) + t * F - G
        return value, self.slope0 + F

    def scalar(self, t: float) -> float:
        return self.jet(t).v

    def jet(self, t: float) -> Jet3:
        memo = self._memo
        hit = memo.get(t)
        if hit is not None:
            return hit
        value, slope = self._value_slope(t)
        inner = _evaluate(self.integrand, t, self._table[3], _JET)
        out = Jet3(value, slope, inner.v, inner.d1)
        if len(memo) >= self._MEMO_LIMIT:
            memo.clear()
        memo[t] = out
        return out
