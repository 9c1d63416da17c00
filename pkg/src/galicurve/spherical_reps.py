"""Harmonic curvature, spherical representations and helix classification.

The tangent, principal-normal and binormal indicatrices of a curve have arc
lengths whose rates against the curve's own arc length are ``kappa``,
``tau`` and ``tau`` respectively.  Integrating these rates gives the
cumulative profiles ``s_T``, ``s_N``, ``s_B``; for a circular helix all
three are affine in ``s``.  Torsion enters through ``|tau|`` so that the
profiles are genuine, nondecreasing arc lengths.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import (
    IsotropicNormalError,
    NotAdmissibleError,
    TooFewPointsError,
    VanishingTorsionError,
)
from .geometry_g3 import (
    GALILEAN,
    CurveSpec,
    Frame,
    Vec3G,
    arc_jets,
    arclength_range,
    check_admissible,
    curvature,
    curvature_torsion,
    frenet_frame,
    param_at_arclength,
)
from .geometry_pg3 import pg_curvature, pg_curvature_torsion, pg_frenet_frame
from .numerics import integrate_adaptive

CIRCULAR_HELIX = "circular_helix"
GENERAL_HELIX = "general_helix"
GENERIC = "generic"
UNDEFINED_TORSION = "undefined_torsion"


def harmonic_curvature(kappa: float, tau: float, eps: float = 1e-9) -> float:
    """First harmonic curvature ``kappa / tau``."""
    if abs(tau) <= eps:
        raise VanishingTorsionError(f"torsion {tau!r} vanishes; harmonic curvature undefined")
    return kappa / tau


def frame(c: CurveSpec, t: float) -> Frame:
    """Frenet frame in the curve's own geometry."""
    return frenet_frame(c, t) if c.geometry == GALILEAN else pg_frenet_frame(c, t)


def _kappa_tau(c: CurveSpec, t: float) -> tuple[float, float, float]:
    if c.geometry == GALILEAN:
        return curvature_torsion(c, t)
    return pg_curvature_torsion(c, t)


def spherical_representation(c: CurveSpec, which: str, t: float) -> Vec3G:
    """Point of the tangent (``T``), normal (``N``) or binormal (``B``) indicatrix."""
    if which not in ("T", "N", "B"):
        raise ValueError(f"which must be T, N or B, got {which!r}")
    return getattr(frame(c, t), which)


# ---------------------------------------------------------------------------
# arc lengths of the indicatrices

def _rate(c: CurveSpec, which: str):
    if which == "T":
        kap = curvature if c.geometry == GALILEAN else pg_curvature
        return lambda s: kap(c, param_at_arclength(c, s))
    return lambda s: abs(_kappa_tau(c, param_at_arclength(c, s))[2])


def _arc_length(c: CurveSpec, which: str, s_lo: float, s_hi: float, tol: float | None) -> float:
    if s_lo > s_hi:
        raise ValueError("s_lo must not exceed s_hi")
    tol = c.tol.quad if tol is None else tol
    return integrate_adaptive(_rate(c, which), s_lo, s_hi, tol).value


def arc_length_T(c: CurveSpec, s_lo: float, s_hi: float, tol: float | None = None) -> float:
    """Arc length of the tangent indicatrix between two arc-length values."""
    return _arc_length(c, "T", s_lo, s_hi, tol)


def arc_length_N(c: CurveSpec, s_lo: float, s_hi: float, tol: float | None = None) -> float:
    return _arc_length(c, "N", s_lo, s_hi, tol)


def arc_length_B(c: CurveSpec, s_lo: float, s_hi: float, tol: float | None = None) -> float:
    # same rate as the normal indicatrix
    return _arc_length(c, "B", s_lo, s_hi, tol)


# ---------------------------------------------------------------------------
# linear fits

@dataclass(frozen=True)
class LinearityReport:
    slope: float
    intercept: float
    max_residual: float
    rms_residual: float


def fit_linear(xs, ys) -> LinearityReport:
    """Least-squares line through ``(xs, ys)`` with residual diagnostics."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D sequences of equal length")
    if len(x) < 3:
        raise TooFewPointsError(f"need at least 3 points, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("xs must be strictly increasing")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    slope = float(np.dot(dx, y - ym) / np.dot(dx, dx))
    intercept = float(ym - slope * xm)
    resid = np.abs(y - (slope * x + intercept))
    return LinearityReport(slope, intercept, float(resid.max()), float(np.sqrt(np.mean(resid**2))))


# ---------------------------------------------------------------------------
# analysis pipeline

@dataclass
class CurveAnalysis:
    """Profiles sampled on a uniform arc-length grid.

    ``H`` is NaN where torsion vanishes.  In the pseudo-Galilean case
    ``kappa``/``tau`` are NaN at isotropic samples and panels across an
    isotropic point contribute nothing to the cumulative arc lengths.
    """

    geometry: str
    s: np.ndarray
    t: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    H: np.ndarray
    sT: np.ndarray
    sN: np.ndarray
    sB: np.ndarray
    signed_tau_integral: float
    flipped: bool = False
    isotropic_points: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def rows(self):
        """Yield ``(s, kappa, tau, H, s_T, s_N, s_B)`` tuples."""
        for i in range(len(self.s)):
            yield (self.s[i], self.kappa[i], self.tau[i], self.H[i], self.sT[i], self.sN[i], self.sB[i])


def analyze(c: CurveSpec, quad_tol: float | None = None, samples: int | None = None) -> CurveAnalysis:
    """Sample ``kappa``, ``tau``, ``H`` and the indicatrix arc lengths.

    The cumulative arc lengths are sums of per-panel adaptive quadratures
    between consecutive grid nodes, with the total tolerance split across
    panels in proportion to their width.

    Raises:
        NotAdmissibleError: if ``x'`` vanishes on the range, or (Galilean)
            the curvature vanishes somewhere a frame is needed.
    """
    quad_tol = c.tol.quad if quad_tol is None else quad_tol
    n = c.samples if samples is None else samples
    if n < 8:
        raise ValueError("need at least 8 samples")
    report = check_admissible(c, require_frame=False)
    if not report.ok:
        raise NotAdmissibleError(report.summary())

    s_lo, s_hi, flipped = arclength_range(c)
    s = np.linspace(s_lo, s_hi, n)
    pseudo = c.geometry != GALILEAN
    notes = []
    if flipped:
        notes.append("x decreases along t; curve traversed in the opposite direction (t -> -t)")

    @lru_cache(maxsize=None)
    def apparatus(sv: float) -> tuple[float, float]:
        _, k, tau = _kappa_tau(c, param_at_arclength(c, sv))
        return k, tau

    kappa = np.empty(n)
    tau = np.empty(n)
    t = np.empty(n)
    defined = np.ones(n, dtype=bool)
    for i, sv in enumerate(s):
        sv = float(sv)
        t[i] = param_at_arclength(c, sv)
        try:
            kappa[i], tau[i] = apparatus(sv)
        except IsotropicNormalError:
            if not pseudo:
                raise
            kappa[i] = tau[i] = np.nan
            defined[i] = False

    # sign of y''^2 - z''^2 is the sign of kappa^2 in pseudo-Galilean terms
    if pseudo:
        qsign = np.array([_normal_sign(c, float(ti)) for ti in t])

    total = s_hi - s_lo
    dT = np.zeros(n - 1)
    dN = np.zeros(n - 1)
    dS = np.zeros(n - 1)
    isotropic: list[float] = [float(s[i]) for i in range(n) if not defined[i]]
    for i in range(n - 1):
        a, b = float(s[i]), float(s[i + 1])
        if pseudo and (not (defined[i] and defined[i + 1]) or qsign[i] != qsign[i + 1]):
            if defined[i] and defined[i + 1]:
                isotropic.append(_isotropic_root(c, a, b))
            continue
        ptol = quad_tol * (b - a) / total if total > 0 else quad_tol
        try:
            dT[i] = integrate_adaptive(lambda u: apparatus(u)[0], a, b, ptol).value
            dN[i] = integrate_adaptive(lambda u: abs(apparatus(u)[1]), a, b, ptol).value
            dS[i] = integrate_adaptive(lambda u: apparatus(u)[1], a, b, ptol).value
        except IsotropicNormalError:
            if not pseudo:
                raise
            dT[i] = dN[i] = dS[i] = 0.0
            isotropic.append(0.5 * (a + b))
    if isotropic:
        notes.append(f"{len(isotropic)} isotropic point(s); panels across them were skipped")

    sT = np.concatenate(([0.0], np.cumsum(dT)))
    sN = np.concatenate(([0.0], np.cumsum(dN)))
    sB = sN.copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        H = np.where(np.abs(tau) > c.eps, kappa / tau, np.nan)
    return CurveAnalysis(
        geometry=c.geometry, s=s, t=t, kappa=kappa, tau=tau, H=H,
        sT=sT, sN=sN, sB=sB, signed_tau_integral=float(dS.sum()),
        flipped=flipped, isotropic_points=sorted(isotropic), notes=notes,
    )


def _normal_q(c: CurveSpec, t: float) -> float:
    _, yj, zj = arc_jets(c, t)
    return yj.d2 * yj.d2 - zj.d2 * zj.d2


def _normal_sign(c: CurveSpec, t: float) -> int:
    q = _normal_q(c, t)
    return 0 if abs(q) <= c.eps else (1 if q > 0 else -1)


def _isotropic_root(c: CurveSpec, a: float, b: float) -> float:
    """Arc length in ``[a, b]`` where ``y''^2 - z''^2`` changes sign."""
    f = lambda sv: _normal_q(c, param_at_arclength(c, sv))  # noqa: E731
    fa, fb = f(a), f(b)
    if fa * fb >= 0:
        return a if abs(fa) <= abs(fb) else b
    return float(brentq(f, a, b, xtol=1e-14))


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class ConstancyStats:
    mean: float
    std: float
    dispersion: float
    minimum: float
    maximum: float


def constancy(values) -> ConstancyStats:
    """Mean, spread and relative dispersion ``std / |mean|`` of finite values."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if len(v) == 0:
        nan = float("nan")
        return ConstancyStats(nan, nan, math.inf, nan, nan)
    mean = float(v.mean())
    std = float(v.std())
    if mean != 0.0:
        disp = std / abs(mean)
    else:
        disp = 0.0 if std == 0.0 else math.inf
    return ConstancyStats(mean, std, disp, float(v.min()), float(v.max()))


@dataclass
class Evidence:
    fits: dict[str, LinearityReport]
    kappa: ConstancyStats
    tau: ConstancyStats
    H: ConstancyStats
    signed_tau_integral: float
    zero_torsion_fraction: float
    linear: dict[str, bool]
    slope_checks: dict[str, bool]
    notes: list[str] = field(default_factory=list)


@dataclass
class HelixClass:
    tag: str
    evidence: Evidence

    def to_dict(self) -> dict:
        return {"tag": self.tag, "evidence": asdict(self.evidence)}


def classify(
    c: CurveSpec,
    tol: float | None = None,
    linearity_tol: float | None = None,
    analysis: CurveAnalysis | None = None,
) -> HelixClass:
    """Classify ``c`` as circular helix, general helix, generic or undefined.

    The tag follows the definitions (constant positive ``kappa`` and
    ``tau``; constant ``kappa/tau``).  Linear fits of the three indicatrix
    arc lengths against ``s`` are attached as evidence together with
    whether their slopes match ``mean(tau*H)`` (tangent) and
    ``mean(kappa/H)`` (normal, binormal).
    """
    tol = c.tol.constancy if tol is None else tol
    linearity_tol = c.tol.linearity if linearity_tol is None else linearity_tol
    a = analyze(c) if analysis is None else analysis

    finite = np.isfinite(a.kappa) & np.isfinite(a.tau)
    zero_tau = finite & (np.abs(a.tau) <= c.eps)
    zero_frac = float(zero_tau.sum()) / len(a.s)

    k_stats = constancy(a.kappa)
    t_stats = constancy(a.tau)
    h_stats = constancy(a.H)
    fits = {
        "T": fit_linear(a.s, a.sT),
        "N": fit_linear(a.s, a.sN),
        "B": fit_linear(a.s, a.sB),
    }
    span = float(a.s[-1] - a.s[0])
    linear = {k: r.max_residual / span < linearity_tol for k, r in fits.items()}

    notes = list(a.notes)
    with np.errstate(divide="ignore", invalid="ignore"):
        tau_H = a.tau * a.H
        kappa_over_H = a.kappa / a.H
    checks: dict[str, bool] = {}
    if np.all(np.isfinite(a.H)):
        rate_T = float(np.mean(tau_H))
        rate_NB = float(np.mean(kappa_over_H))
        checks = {
            "T_slope_matches_tauH": abs(fits["T"].slope - rate_T) <= linearity_tol,
            "N_slope_matches_kappa_over_H": abs(fits["N"].slope - rate_NB) <= linearity_tol,
            "B_slope_matches_kappa_over_H": abs(fits["B"].slope - rate_NB) <= linearity_tol,
        }

    if not finite.all():
        tag = GENERIC
        notes.append("frame undefined at some samples")
    elif zero_frac > 0.01:
        tag = UNDEFINED_TORSION
    elif (
        k_stats.dispersion < tol and t_stats.dispersion < tol
        and k_stats.mean > 0 and t_stats.mean > 0
    ):
        tag = CIRCULAR_HELIX
    elif (
        np.all(np.isfinite(a.H)) and h_stats.dispersion < tol
        and (np.all(a.tau > c.eps) or np.all(a.tau < -c.eps))
    ):
        tag = GENERAL_HELIX
    else:
        tag = GENERIC

    evidence = Evidence(
        fits=fits, kappa=k_stats, tau=t_stats, H=h_stats,
        signed_tau_integral=a.signed_tau_integral,
        zero_torsion_fraction=zero_frac, linear=linear,
        slope_checks=checks, notes=notes,
    )
    return HelixClass(tag, evidence)


__all__ = [
    "CIRCULAR_HELIX",
    "GENERAL_HELIX",
    "GENERIC",
    "UNDEFINED_TORSION",
    "harmonic_curvature",
    "frame",
    "spherical_representation",
    "arc_length_T",
    "arc_length_N",
    "arc_length_B",
    "LinearityReport",
    "fit_linear",
    "CurveAnalysis",
    "analyze",
    "ConstancyStats",
    "constancy",
    "Evidence",
    "HelixClass",
    "classify",
]
