"""Pseudo-Galilean counterparts of the Galilean Frenet apparatus.

The metric on isotropic vectors is Lorentzian, ``x2*y2 - x3*y3``.  With the
convention ``kappa = sqrt(|y''^2 - z''^2|)`` and ``B = (0, z'', y'')/kappa``
a curve with spacelike principal normal has a spacelike tangent, spacelike
normal and timelike binormal, and its frame obeys

    T' = kappa N,   N' = tau B,   B' = tau N

(note the sign of ``B'``, opposite to the Galilean case).
"""

from __future__ import annotations

import math

from .errors import IsotropicNormalError
from .geometry_g3 import ZERO_EPS, CurveSpec, Frame, Vec3G, arc_jets
from .numerics import Jet3

SPACELIKE = "spacelike"
TIMELIKE = "timelike"
ISOTROPIC = "isotropic"


def pg_dot(X, Y, eps: float = ZERO_EPS) -> float:
    if abs(X[0]) > eps or abs(Y[0]) > eps:
        return X[0] * Y[0]
    return X[1] * Y[1] - X[2] * Y[2]


def causal_character(X, eps: float = ZERO_EPS) -> str:
    q = pg_dot(X, X, eps)
    if q > eps:
        return SPACELIKE
    if q < -eps:
        return TIMELIKE
    return ISOTROPIC


def _pg_kappa(yj: Jet3, zj: Jet3, eps: float, t: float) -> float:
    q = yj.d2 * yj.d2 - zj.d2 * zj.d2
    if abs(q) <= eps:
        raise IsotropicNormalError(f"isotropic principal normal at t={t!r}")
    return math.sqrt(abs(q))


def _pg_tau(yj: Jet3, zj: Jet3, kappa: float) -> float:
    return (yj.d2 * zj.d3 - yj.d3 * zj.d2) / (kappa * kappa)


def pg_curvature(c: CurveSpec, t: float) -> float:
    _, yj, zj = arc_jets(c, t)
    return _pg_kappa(yj, zj, c.eps, t)


def pg_torsion(c: CurveSpec, t: float) -> float:
    _, yj, zj = arc_jets(c, t)
    return _pg_tau(yj, zj, _pg_kappa(yj, zj, c.eps, t))


def pg_curvature_torsion(c: CurveSpec, t: float) -> tuple[float, float, float]:
    s0, yj, zj = arc_jets(c, t)
    k = _pg_kappa(yj, zj, c.eps, t)
    return s0, k, _pg_tau(yj, zj, k)


def pg_frenet_frame(c: CurveSpec, t: float) -> Frame:
    """Frame with causal labels.

    Labels come from the sign of each vector's self-product; for a
    spacelike normal they read (spacelike, spacelike, timelike).  Timelike
    normals are labelled but their Frenet equations are not covered here.
    """
    _, yj, zj = arc_jets(c, t)
    k = _pg_kappa(yj, zj, c.eps, t)
    T = Vec3G(1.0, yj.d1, zj.d1)
    N = Vec3G(0.0, yj.d2 / k, zj.d2 / k)
    B = Vec3G(0.0, zj.d2 / k, yj.d2 / k)
    return Frame(
        T=T, N=N, B=B, kappa=k, tau=_pg_tau(yj, zj, k),
        causal=(causal_character(T), causal_character(N), causal_character(B)),
    )


__all__ = [
    "SPACELIKE",
    "TIMELIKE",
    "ISOTROPIC",
    "pg_dot",
    "causal_character",
    "pg_curvature",
    "pg_torsion",
    "pg_curvature_torsion",
    "pg_frenet_frame",
]
