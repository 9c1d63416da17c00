"""Independent oracles and shared test curves."""

import math
import random

import numpy as np
import sympy as sp

from galicurve.errors import DomainError
from galicurve.exprparse import eval_scalar, parse
from galicurve.geometry_g3 import CurveSpec, curve_from_second_derivatives
from galicurve.spherical_reps import frame

T = sp.Symbol("t")


def sympy_jet(src: str, t0: float, **consts) -> tuple:
    """Value and first three derivatives of an expression string via sympy."""
    expr = sp.sympify(src.replace("^", "**"), locals={k: sp.Float(v) for k, v in consts.items()} | {"t": T})
    return tuple(float(sp.diff(expr, T, k).subs(T, t0).evalf(30)) for k in range(4))


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def second_diff(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


# -- curves -----------------------------------------------------------------

def helix(a=2.0, t_range=(0.0, 2 * math.pi), **kw):
    return CurveSpec.from_strings("t", "a*cos(t)", "a*sin(t)", t_range, constants={"a": a}, **kw)


def twisted_cubic(t_range=(0.0, 1.0), **kw):
    return CurveSpec.from_strings("t", "t^2/2", "t^3/6", t_range, **kw)


def parabola(t_range=(0.0, 1.0), **kw):
    return CurveSpec.from_strings("t", "t^2/2", "0", t_range, **kw)


def hyperbolic(t_range=(0.0, 2.0), **kw):
    return CurveSpec.from_strings("t", "cosh(t)", "sinh(t)", t_range, geometry="pseudo-galilean", **kw)


def general_helix(**kw):
    """y'' = 2s cos(s^2), z'' = 2s sin(s^2) on [0.5, 2]; kappa = tau = 2s."""
    return curve_from_second_derivatives(
        "2*t*cos(t^2)", "2*t*sin(t^2)", (0.5, 2.0),
        dy0=math.sin(0.25), dz0=-math.cos(0.25), tol=1e-10, **kw,
    )


# -- Frenet residuals -------------------------------------------------------

def frenet_residuals(c: CurveSpec, s: float, h: float, b_sign: float) -> dict:
    """Forward-difference residuals of T' = kN, N' = tB, B' = b_sign*tN.

    Returns Euclidean norms on the (x2, x3) components plus the absolute x1
    mismatch for each equation.
    """
    f0 = frame(c, s)
    f1 = frame(c, s + h)
    out = {}
    for name, a0, a1, rhs in (
        ("T", f0.T, f1.T, f0.kappa * np.asarray(f0.N)),
        ("N", f0.N, f1.N, f0.tau * np.asarray(f0.B)),
        ("B", f0.B, f1.B, b_sign * f0.tau * np.asarray(f0.N)),
    ):
        d = (np.asarray(a1) - np.asarray(a0)) / h - rhs
        out[name] = (float(np.hypot(d[1], d[2])), abs(float(d[0])))
    return out


def convergence_ratios(c: CurveSpec, s: float, b_sign: float, h1=1e-3, h2=1e-4) -> dict:
    r1 = frenet_residuals(c, s, h1, b_sign)
    r2 = frenet_residuals(c, s, h2, b_sign)
    return {k: r1[k][0] / r2[k][0] for k in r1}, r1, r2


# -- random expressions ----------------------------------------------------

def random_expression(rng: random.Random, depth: int) -> str:
    """Expression over a safe domain for t in [-1, 1]."""
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(["t", "a", "b", f"{rng.uniform(0.5, 2):.3f}"])
    sub = lambda: random_expression(rng, depth - 1)  # noqa: E731
    kind = rng.randrange(11)
    if kind == 0:
        return f"({sub()} + {sub()})"
    if kind == 1:
        return f"({sub()} - {sub()})"
    if kind == 2:
        return f"({sub()} * {sub()})"
    if kind == 3:
        return f"({sub()} / (2 + cos({sub()})))"
    if kind == 4:
        return f"{rng.choice(['sin', 'cos'])}({sub()})"
    if kind == 5:
        return f"{rng.choice(['exp', 'sinh', 'cosh'])}(sin({sub()}))"
    if kind == 6:
        return f"log(2 + sin({sub()}))"
    if kind == 7:
        return f"sqrt(1 + ({sub()})^2)"
    if kind == 8:
        if rng.random() < 0.5:
            return f"({sub()})^{rng.choice([2, 3, -1])}"
        return f"-{sub()}"
    if kind == 9:
        return f"(1.5 + sin({sub()}))^{rng.uniform(-1.5, 2.5):.3f}"
    return f"(2 + cos({sub()}))^(sin({sub()}))"


BINDINGS = {"a": 0.7, "b": -1.3}


def random_corpus(n: int, seed: int):
    """``n`` distinct random expressions in ``t`` that evaluate at ``t = 0``."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        src = random_expression(rng, 3)
        if "t" not in src or src in out:
            continue
        e = parse(src)
        try:
            eval_scalar(e, 0.0, BINDINGS)
        except (DomainError, ZeroDivisionError):
            continue
        out.append(src)
    return out
