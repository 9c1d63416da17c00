"""Curves in Galilean 3-space.

A curve ``(x(t), y(t), z(t))`` is admissible when ``x'(t) != 0``; its
Galilean arc length is then ``s = x(t)`` and the curve can be written in the
normal form ``(s, y(s), z(s))``.  All Frenet quantities below are computed
from the arc-length jets of ``y`` and ``z`` obtained by series inversion of
``x``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import (
    InflectionPointError,
    NonInvertibleError,
    NotAdmissibleError,
    NumericalError,
)
from .exprparse import (
    DEFAULT_CONSTANTS,
    Const,
    Expr,
    TwiceIntegrated,
    Var,
    eval_jet,
    eval_scalar,
    free_names,
    parse,
    validate_bindings,
)
from .numerics import Jet3, jet_compose, jet_invert_series

GALILEAN = "galilean"
PSEUDO_GALILEAN = "pseudo-galilean"
GEOMETRIES = (GALILEAN, PSEUDO_GALILEAN)

ZERO_EPS = 1e-12


class Vec3G(NamedTuple):
    """Vector in Galilean coordinates; ``x1`` is the non-isotropic component."""

    x1: float
    x2: float
    x3: float


@dataclass(frozen=True)
class Tolerances:
    eps: float = 1e-9
    quad: float = 1e-10
    constancy: float = 1e-6
    linearity: float = 1e-7

    def __post_init__(self):
        for name in ("eps", "quad", "constancy", "linearity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")


@dataclass(frozen=True)
class CurveSpec:
    """Parametric curve ``t -> (x(t), y(t), z(t))`` over ``t_range``."""

    x: Expr
    y: Expr
    z: Expr
    t_range: tuple[float, float]
    geometry: str = GALILEAN
    constants: Mapping[str, float] = field(default_factory=dict)
    samples: int = 256
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}")
        lo, hi = (float(v) for v in self.t_range)
        if not lo < hi:
            raise ValueError("t_range must satisfy t_lo < t_hi")
        if self.samples < 8:
            raise ValueError("samples must be at least 8")
        object.__setattr__(self, "t_range", (lo, hi))
        object.__setattr__(self, "constants", validate_bindings(self.constants))

    @classmethod
    def from_strings(cls, x: str, y: str, z: str, t_range, **kwargs) -> CurveSpec:
        return cls(parse(x), parse(y), parse(z), tuple(t_range), **kwargs)

    @property
    def eps(self) -> float:
        return self.tol.eps

    def unbound_names(self) -> set[str]:
        names = free_names(self.x) | free_names(self.y) | free_names(self.z)
        return names - set(self.constants) - set(DEFAULT_CONSTANTS)

    def point(self, t: float) -> Vec3G:
        b = self.constants
        return Vec3G(eval_scalar(self.x, t, b), eval_scalar(self.y, t, b), eval_scalar(self.z, t, b))

    def jets(self, t: float) -> tuple[Jet3, Jet3, Jet3]:
        b = self.constants
        return eval_jet(self.x, t, b), eval_jet(self.y, t, b), eval_jet(self.z, t, b)


@dataclass(frozen=True)
class Frame:
    T: Vec3G
    N: Vec3G
    B: Vec3G
    kappa: float
    tau: float
    causal: tuple[str, str, str] | None = None


@dataclass(frozen=True)
class MotionB6:
    """Galilean motion: translation, shear along x and rotation in the yz-plane."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c, self.d, self.e, self.phi)):
            raise ValueError("motion parameters must be finite")

    @classmethod
    def from_sequence(cls, values) -> MotionB6:
        values = [float(v) for v in values]
        if len(values) != 6:
            raise ValueError("a Galilean motion takes six parameters a,b,c,d,e,phi")
        return cls(*values)


# ---------------------------------------------------------------------------
# scalar product, motions

def galilean_dot(X, Y, eps: float = ZERO_EPS) -> float:
    """Galilean scalar product.

    ``x1*y1`` unless both first components vanish, in which case the
    Euclidean product of the remaining components.
    """
    if abs(X[0]) > eps or abs(Y[0]) > eps:
        return X[0] * Y[0]
    return X[1] * Y[1] + X[2] * Y[2]


def apply_motion(p, m: MotionB6) -> Vec3G:
    x, y, z = p
    cp, sp = math.cos(m.phi), math.sin(m.phi)
    return Vec3G(
        m.a + x,
        m.b + m.c * x + y * cp + z * sp,
        m.d + m.e * x - y * sp + z * cp,
    )


def transform_curve(c: CurveSpec, m: MotionB6) -> CurveSpec:
    """Apply ``m`` to the coordinate expressions themselves.

    The result is a new expression tree per coordinate; nothing is sampled,
    so jets of the moved curve stay exact.  Only Galilean curves have
    ``kappa`` and ``tau`` invariant under this map.
    """
    cp, sp = math.cos(m.phi), math.sin(m.phi)
    x, y, z = c.x, c.y, c.z
    new_x = Const(m.a) + x
    new_y = Const(m.b) + Const(m.c) * x + y * Const(cp) + z * Const(sp)
    new_z = Const(m.d) + Const(m.e) * x - y * Const(sp) + z * Const(cp)
    return CurveSpec(
        new_x, new_y, new_z, c.t_range,
        geometry=c.geometry, constants=c.constants, samples=c.samples, tol=c.tol,
    )


# ---------------------------------------------------------------------------
# arc-length normal form

def reparameterize(c: CurveSpec, t0: float) -> tuple[float, Jet3, Jet3]:
    """Arc length ``s0 = x(t0)`` and the jets of ``y(s)``, ``z(s)`` there.

    Raises:
        NonInvertibleError: if ``x'(t0)`` is numerically zero.
    """
    xj, yj, zj = c.jets(t0)
    if isinstance(c.x, Var):
        return xj.v, yj, zj
    inv = jet_invert_series(xj, t0)
    return xj.v, jet_compose(yj, inv), jet_compose(zj, inv)


def arc_jets(c: CurveSpec, t: float) -> tuple[float, Jet3, Jet3]:
    """:func:`reparameterize` with admissibility failures normalised."""
    try:
        s0, yj, zj = reparameterize(c, t)
    except NonInvertibleError as exc:
        raise NotAdmissibleError(f"x'(t) vanishes at t={t!r}") from exc
    if not (yj.is_finite() and zj.is_finite() and math.isfinite(s0)):
        raise NotAdmissibleError(f"non-finite derivatives at t={t!r}")
    return s0, yj, zj


def param_at_arclength(c: CurveSpec, s: float) -> float:
    """Parameter ``t`` in ``t_range`` with ``x(t) = s``."""
    if isinstance(c.x, Var):
        return float(s)
    lo, hi = c.t_range
    b = c.constants
    f = lambda t: eval_scalar(c.x, t, b) - s  # noqa: E731
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NotAdmissibleError(f"arc length {s!r} is outside the curve's range")
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def arclength_range(c: CurveSpec) -> tuple[float, float, bool]:
    """``(s_lo, s_hi, flipped)``; ``flipped`` when ``x`` decreases along ``t``."""
    s_a = eval_scalar(c.x, c.t_range[0], c.constants)
    s_b = eval_scalar(c.x, c.t_range[1], c.constants)
    return (s_a, s_b, False) if s_a <= s_b else (s_b, s_a, True)


# ---------------------------------------------------------------------------
# Frenet apparatus

def _kappa(yj: Jet3, zj: Jet3) -> float:
    return math.sqrt(yj.d2 * yj.d2 + zj.d2 * zj.d2)


def _det_term(yj: Jet3, zj: Jet3) -> float:
    # det(a', a'', a''') with a' = (1, y', z'), a'' = (0, y'', z''), a''' = (0, y''', z''')
    return yj.d2 * zj.d3 - yj.d3 * zj.d2


def curvature(c: CurveSpec, t: float) -> float:
    _, yj, zj = arc_jets(c, t)
    return _kappa(yj, zj)


def torsion(c: CurveSpec, t: float) -> float:
    _, yj, zj = arc_jets(c, t)
    return _torsion_from_jets(yj, zj, c.eps, t)


def _torsion_from_jets(yj: Jet3, zj: Jet3, eps: float, t: float) -> float:
    k = _kappa(yj, zj)
    if k <= eps:
        raise InflectionPointError(f"curvature {k!r} vanishes at t={t!r}")
    return _det_term(yj, zj) / (k * k)


def curvature_torsion(c: CurveSpec, t: float) -> tuple[float, float, float]:
    """``(s, kappa, tau)`` at parameter ``t`` from one jet evaluation."""
    s0, yj, zj = arc_jets(c, t)
    return s0, _kappa(yj, zj), _torsion_from_jets(yj, zj, c.eps, t)


def frenet_frame(c: CurveSpec, t: float) -> Frame:
    _, yj, zj = arc_jets(c, t)
    k = _kappa(yj, zj)
    tau = _torsion_from_jets(yj, zj, c.eps, t)
    return Frame(
        T=Vec3G(1.0, yj.d1, zj.d1),
        N=Vec3G(0.0, yj.d2 / k, zj.d2 / k),
        B=Vec3G(0.0, -zj.d2 / k, yj.d2 / k),
        kappa=k,
        tau=tau,
    )


# ---------------------------------------------------------------------------
# admissibility

@dataclass
class Violation:
    t: float
    reason: str


@dataclass
class AdmissibilityReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)

    def summary(self, limit: int = 5) -> str:
        parts = [f"t={v.t:.6g}: {v.reason}" for v in self.violations[:limit]]
        more = len(self.violations) - limit
        if more > 0:
            parts.append(f"... and {more} more")
        return "; ".join(parts)


def _normal_defect(c: CurveSpec, yj: Jet3, zj: Jet3) -> str | None:
    if c.geometry == GALILEAN:
        if _kappa(yj, zj) <= c.eps:
            return "curvature vanishes (no Frenet frame)"
    elif abs(yj.d2 * yj.d2 - zj.d2 * zj.d2) <= c.eps:
        return "isotropic principal normal"
    return None


def check_admissible(c: CurveSpec, require_frame: bool = True) -> AdmissibilityReport:
    """Diagnose ``c`` on its sample grid.

    Reports every grid point where ``x'`` is numerically zero, every sign
    change of ``x'`` between neighbouring grid points (located by root
    finding), and, when ``require_frame``, every point where the principal
    normal is undefined.
    """
    lo, hi = c.t_range
    ts = np.linspace(lo, hi, c.samples)
    violations: list[Violation] = []
    dx = np.empty(len(ts))
    b = c.constants
    for i, t in enumerate(ts):
        t = float(t)
        try:
            xj = eval_jet(c.x, t, b)
        except NumericalError as exc:
            violations.append(Violation(t, f"evaluation failed: {exc}"))
            dx[i] = np.nan
            continue
        dx[i] = xj.d1
        if abs(xj.d1) <= c.eps:
            violations.append(Violation(t, "x'(t) = 0 (not reparameterizable by arc length)"))
            continue
        if require_frame:
            try:
                _, yj, zj = arc_jets(c, t)
            except (NotAdmissibleError, NumericalError) as exc:
                violations.append(Violation(t, f"evaluation failed: {exc}"))
                continue
            defect = _normal_defect(c, yj, zj)
            if defect:
                violations.append(Violation(t, defect))
    for i in range(len(ts) - 1):
        a, bb = dx[i], dx[i + 1]
        if np.isfinite(a) and np.isfinite(bb) and abs(a) > c.eps and abs(bb) > c.eps and a * bb < 0:
            root = brentq(lambda t: eval_jet(c.x, t, b).d1, float(ts[i]), float(ts[i + 1]))
            violations.append(Violation(root, "x'(t) = 0 (not reparameterizable by arc length)"))
    violations.sort(key=lambda v: v.t)
    return AdmissibilityReport(not violations, violations)


# ---------------------------------------------------------------------------
# constructed curves

def curve_from_second_derivatives(
    y2: str | Expr,
    z2: str | Expr,
    t_range,
    *,
    y0: float = 0.0,
    z0: float = 0.0,
    dy0: float = 0.0,
    dz0: float = 0.0,
    constants: Mapping[str, float] | None = None,
    tol: float = 1e-10,
    **kwargs,
) -> CurveSpec:
    """Curve ``(t, y(t), z(t))`` given ``y''`` and ``z''`` as expressions.

    ``y`` and ``z`` are obtained by integrating twice from ``t_range[0]``,
    starting from values ``y0, z0`` and slopes ``dy0, dz0``.
    """
    lo, hi = (float(v) for v in t_range)
    consts = tuple(sorted(validate_bindings(constants).items()))
    y2 = parse(y2) if isinstance(y2, str) else y2
    z2 = parse(z2) if isinstance(z2, str) else z2
    y = TwiceIntegrated(y2, lo, y0, dy0, (lo, hi), consts, tol)
    z = TwiceIntegrated(z2, lo, z0, dz0, (lo, hi), consts, tol)
    return CurveSpec(Var(), y, z, (lo, hi), constants=dict(consts), **kwargs)


__all__ = [
    "GALILEAN",
    "PSEUDO_GALILEAN",
    "Vec3G",
    "Tolerances",
    "CurveSpec",
    "Frame",
    "MotionB6",
    "Violation",
    "AdmissibilityReport",
    "galilean_dot",
    "apply_motion",
    "transform_curve",
    "reparameterize",
    "arc_jets",
    "param_at_arclength",
    "arclength_range",
    "curvature",
    "torsion",
    "curvature_torsion",
    "frenet_frame",
    "check_admissible",
    "curve_from_second_derivatives",
]
