"""Third-order jet arithmetic and adaptive Simpson quadrature.

A :class:`Jet3` carries a function value together with its first three
derivatives at one point.  Jets store raw derivatives, not Taylor
coefficients, so the product and chain rules below carry the binomial
weights explicitly (Leibniz: 1, 3, 3, 1; Faa di Bruno to third order).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from .errors import DivisionByZero, DomainError, MaxDepthError, NonInvertibleError

DEFAULT_EPS = 1e-12

__all__ = [
    "Jet3",
    "QuadratureResult",
    "jet_add",
    "jet_sub",
    "jet_neg",
    "jet_scale",
    "jet_mul",
    "jet_div",
    "jet_elementary",
    "jet_invert_series",
    "jet_compose",
    "integrate_adaptive",
    "ELEMENTARY",
]


@dataclass(frozen=True, slots=True)
class Jet3:
    """Value and first three derivatives of a function at a point."""

    v: float
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0

    @classmethod
    def constant(cls, c: float) -> Jet3:
        return cls(float(c), 0.0, 0.0, 0.0)

    @classmethod
    def identity(cls, t0: float) -> Jet3:
        return cls(float(t0), 1.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.v, self.d1, self.d2, self.d3)

    def is_finite(self) -> bool:
        return all(math.isfinite(x) for x in (self.v, self.d1, self.d2, self.d3))

    def __add__(self, other):
        return jet_add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_sub(self, _lift(other))

    def __rsub__(self, other):
        return jet_sub(_lift(other), self)

    def __mul__(self, other):
        if isinstance(other, Jet3):
            return jet_mul(self, other)
        return jet_scale(self, float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return jet_div(self, _lift(other))

    def __rtruediv__(self, other):
        return jet_div(_lift(other), self)

    def __neg__(self):
        return jet_neg(self)


def _lift(x) -> Jet3:
    return x if isinstance(x, Jet3) else Jet3.constant(x)


def jet_add(a: Jet3, b: Jet3) -> Jet3:
    return Jet3(a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3)


def jet_sub(a: Jet3, b: Jet3) -> Jet3:
    return Jet3(a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3)


def jet_neg(a: Jet3) -> Jet3:
    return Jet3(-a.v, -a.d1, -a.d2, -a.d3)


def jet_scale(a: Jet3, c: float) -> Jet3:
    return Jet3(c * a.v, c * a.d1, c * a.d2, c * a.d3)


def jet_mul(a: Jet3, b: Jet3) -> Jet3:
    """Leibniz rule truncated at third order."""
    return Jet3(
        a.v * b.v,
        a.d1 * b.v + a.v * b.d1,
        a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
        a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3,
    )


def jet_div(a: Jet3, b: Jet3, eps: float = DEFAULT_EPS) -> Jet3:
    """Jet of ``a / b``.

    Solves ``q * b = a`` order by order, so ``jet_mul(q, b)`` reproduces
    ``a`` up to rounding.

    Raises:
        DivisionByZero: if ``|b.v| < eps``.
    """
    if abs(b.v) < eps:
        raise DivisionByZero(f"jet division by value {b.v!r}")
    q0 = a.v / b.v
    q1 = (a.d1 - q0 * b.d1) / b.v
    q2 = (a.d2 - 2.0 * q1 * b.d1 - q0 * b.d2) / b.v
    q3 = (a.d3 - 3.0 * q2 * b.d1 - 3.0 * q1 * b.d2 - q0 * b.d3) / b.v
    return Jet3(q0, q1, q2, q3)


def jet_compose(f: Jet3, g: Jet3) -> Jet3:
    """Jet of ``f o g`` where ``f`` holds the outer derivatives at ``g.v``."""
    g1, g2, g3 = g.d1, g.d2, g.d3
    return Jet3(
        f.v,
        f.d1 * g1,
        f.d2 * g1 * g1 + f.d1 * g2,
        f.d3 * g1 * g1 * g1 + 3.0 * f.d2 * g1 * g2 + f.d1 * g3,
    )


def jet_invert_series(x: Jet3, t0: float | None = None, eps: float = DEFAULT_EPS) -> Jet3:
    """Jet of the inverse function ``t(s)`` at ``s0 = x.v``.

    ``x`` holds the derivatives of ``s = x(t)`` at ``t0``.  The value slot of
    the jet of an inverse is ``t0`` itself, which ``x`` does not record; pass
    it explicitly, otherwise ``x.v`` is used (correct when ``x(t0) = t0``).

    Raises:
        NonInvertibleError: if ``|x.d1| < eps``.
    """
    x1, x2, x3 = x.d1, x.d2, x.d3
    if abs(x1) < eps:
        raise NonInvertibleError(f"derivative {x1!r} too small to invert")
    t1 = 1.0 / x1
    t2 = -x2 / x1**3
    t3 = (3.0 * x2 * x2 - x1 * x3) / x1**5
    return Jet3(x.v if t0 is None else float(t0), t1, t2, t3)


# Outer derivatives (f, f', f'', f''') at u for each elementary function.
def _outer_sin(u):
    s, c = math.sin(u), math.cos(u)
    return Jet3(s, c, -s, -c)


def _outer_cos(u):
    s, c = math.sin(u), math.cos(u)
    return Jet3(c, -s, -c, s)


def _outer_sinh(u):
    sh, ch = math.sinh(u), math.cosh(u)
    return Jet3(sh, ch, sh, ch)


def _outer_cosh(u):
    sh, ch = math.sinh(u), math.cosh(u)
    return Jet3(ch, sh, ch, sh)


def _outer_exp(u):
    e = math.exp(u)
    return Jet3(e, e, e, e)


def _outer_log(u):
    if u <= 0.0:
        raise DomainError(f"log of non-positive value {u!r}")
    r = 1.0 / u
    return Jet3(math.log(u), r, -r * r, 2.0 * r * r * r)


def _outer_sqrt(u):
    if u <= 0.0:
        raise DomainError(f"sqrt jet needs a positive argument, got {u!r}")
    r = math.sqrt(u)
    return Jet3(r, 0.5 / r, -0.25 / (r * u), 0.375 / (r * u * u))


def _outer_pow(u, p):
    if not float(p).is_integer() and u <= 0.0:
        raise DomainError(f"non-integer power {p!r} of non-positive value {u!r}")
    out = []
    coef = 1.0
    for k in range(4):
        if coef == 0.0:
            out.append(0.0)
        elif u == 0.0 and p - k < 0:
            raise DomainError(f"power {p!r} has no third-order jet at 0")
        else:
            out.append(coef * u ** (p - k))
        coef *= p - k
    return Jet3(*out)


ELEMENTARY: dict[str, Callable[[float], Jet3]] = {
    "sin": _outer_sin,
    "cos": _outer_cos,
    "sinh": _outer_sinh,
    "cosh": _outer_cosh,
    "exp": _outer_exp,
    "log": _outer_log,
    "sqrt": _outer_sqrt,
}


def jet_elementary(f: str, a: Jet3, p: float | None = None) -> Jet3:
    """Apply an elementary function to a jet.

    ``f`` is one of ``sin, cos, sinh, cosh, exp, log, sqrt`` or ``pow``
    (constant exponent ``p``).

    Raises:
        DomainError: outside the real domain of ``f`` (``log``/``sqrt`` need
            ``a.v > 0``) or on overflow.
    """
    try:
        if f == "pow":
            if p is None:
                raise ValueError("pow needs a constant exponent p")
            outer = _outer_pow(a.v, p)
        else:
            try:
                outer = ELEMENTARY[f](a.v)
            except KeyError:
                raise ValueError(f"unknown elementary function {f!r}") from None
    except OverflowError as exc:
        raise DomainError(f"{f} overflowed at {a.v!r}") from exc
    return jet_compose(outer, a)


@dataclass(frozen=True, slots=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> QuadratureResult:
    """Adaptive Simpson quadrature with interval bisection.

    Each accepted panel is Richardson-corrected, so cubics are integrated
    exactly on the first pass.  The per-panel tolerance halves with every
    bisection; a panel whose Simpson estimates agree to rounding level is
    accepted even if the halved tolerance has fallen below machine precision.

    Raises:
        ValueError: if ``a > b`` or ``tol <= 0``.
        MaxDepthError: if a panel is still unresolved at ``max_depth``.
    """
    if a > b:
        raise ValueError(f"integration bounds out of order: {a!r} > {b!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")

    count = 0

    def feval(x: float) -> float:
        nonlocal count
        count += 1
        return f(x)

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol_here, depth):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = feval(lm)
        frm = feval(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        roundoff = 64.0 * 2.2e-16 * (abs(left) + abs(right))
        if abs(delta) <= 15.0 * tol_here or abs(delta) <= roundoff:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth or not (lo < lm < mid < rm < hi):
            raise MaxDepthError(
                f"adaptive Simpson unresolved on [{lo!r}, {hi!r}] at depth {depth}"
            )
        lv, le = recurse(lo, mid, flo, flm, fmid, left, 0.5 * tol_here, depth + 1)
        rv, re = recurse(mid, hi, fmid, frm, fhi, right, 0.5 * tol_here, depth + 1)
        return lv + rv, le + re

    fa = feval(a)
    fb = feval(b)
    fm = feval(0.5 * (a + b))
    value, err = recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)
    return QuadratureResult(value, err, count)
