import math
import random

import numpy as np
import pytest

from galicurve.errors import InflectionPointError, NonInvertibleError, NotAdmissibleError
from galicurve.exprparse import eval_scalar
from galicurve.geometry_g3 import (
    CurveSpec,
    MotionB6,
    Tolerances,
    Vec3G,
    apply_motion,
    arclength_range,
    check_admissible,
    curvature,
    curvature_torsion,
    frenet_frame,
    galilean_dot,
    param_at_arclength,
    reparameterize,
    torsion,
    transform_curve,
)

from helpers import convergence_ratios, general_helix, helix, parabola, twisted_cubic


def random_motion(rng: random.Random) -> MotionB6:
    return MotionB6(*(rng.uniform(-3, 3) for _ in range(5)), rng.uniform(-math.pi, math.pi))


# -- scalar product ------------------------------------------------------------

def test_galilean_dot_examples():
    assert galilean_dot((2, 5, 7), (3, 1, 1)) == 6
    assert galilean_dot((0, 3, 4), (0, 1, 2)) == 11
    assert galilean_dot((0, 3, 4), (0, 3, 4)) == 25
    assert galilean_dot((0, 3, 4), (1e-13, 1, 2)) == 11
    assert galilean_dot((0, 3, 4), (1e-11, 1, 2)) == 0.0


# -- construction ----------------------------------------------------------------

def test_curve_spec_validation():
    with pytest.raises(ValueError):
        CurveSpec.from_strings("t", "t", "t", (1.0, 1.0))
    with pytest.raises(ValueError):
        CurveSpec.from_strings("t", "t", "t", (0.0, 1.0), samples=7)
    with pytest.raises(ValueError):
        CurveSpec.from_strings("t", "t", "t", (0.0, 1.0), geometry="euclidean")
    with pytest.raises(ValueError):
        Tolerances(eps=0.0)
    c = CurveSpec.from_strings("t", "a*t", "b", (0.0, 1.0))
    assert c.unbound_names() == {"a", "b"}


# -- admissibility ---------------------------------------------------------------

def test_admissible_helix():
    rep = check_admissible(helix(1.0))
    assert rep.ok and rep.violations == []


def test_stationary_x_is_located():
    c = CurveSpec.from_strings("t^2", "t", "0", (-1.0, 1.0))
    rep = check_admissible(c, require_frame=False)
    assert not rep.ok
    assert len(rep.violations) == 1
    assert rep.violations[0].t == pytest.approx(0.0, abs=1e-12)
    assert "x'" in rep.violations[0].reason


def test_straight_line_has_no_frame_anywhere():
    c = CurveSpec.from_strings("t", "t", "0", (0.0, 1.0), samples=16)
    rep = check_admissible(c)
    assert len(rep.violations) == 16
    assert all("curvature" in v.reason for v in rep.violations)
    assert check_admissible(c, require_frame=False).ok
    assert "more" in rep.summary()


# -- arc-length normal form -----------------------------------------------------

def test_reparameterize_scaled_parameter():
    c = CurveSpec.from_strings("2*t", "t^2", "0", (0.0, 2.0))
    s0, yj, zj = reparameterize(c, 1.0)
    assert s0 == 2.0
    assert yj.as_tuple() == pytest.approx((1.0, 1.0, 0.5, 0.0), abs=1e-15)
    assert zj.as_tuple() == (0.0, 0.0, 0.0, 0.0)


def test_reparameterize_passes_through_arc_length_form():
    s0, yj, _ = reparameterize(helix(1.0), 0.0)
    assert s0 == 0.0
    assert yj.as_tuple() == (1.0, 0.0, -1.0, 0.0)


def test_reparameterize_cubic_parameter():
    c = CurveSpec.from_strings("t+t^3", "t", "0", (-1.0, 1.0))
    _, yj, _ = reparameterize(c, 0.0)
    assert yj.d1 == 1.0
    # t(s) = s - s^3 + ...: y''' = -6
    assert yj.d2 == pytest.approx(0.0, abs=1e-15)
    assert yj.d3 == pytest.approx(-6.0, rel=1e-14)


def test_reparameterize_stationary_point():
    c = CurveSpec.from_strings("t^2", "t", "0", (-1.0, 1.0))
    with pytest.raises(NonInvertibleError):
        reparameterize(c, 0.0)
    with pytest.raises(NotAdmissibleError):
        curvature(c, 0.0)


# -- curvature and torsion ---------------------------------------------------------

@pytest.mark.parametrize("s", [0.0, 0.7, 2.0, 5.5])
def test_helix_curvature_torsion(s):
    c = helix(2.0)
    assert curvature(c, s) == pytest.approx(2.0, abs=1e-12)
    assert torsion(c, s) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("s", [0.0, 0.3, 1.0])
def test_twisted_cubic_closed_forms(s):
    c = twisted_cubic()
    assert curvature(c, s) == pytest.approx(math.sqrt(1 + s * s), abs=1e-14)
    assert torsion(c, s) == pytest.approx(1 / (1 + s * s), abs=1e-14)


def test_straight_line_curvature_and_inflection():
    c = CurveSpec.from_strings("t", "t", "0", (0.0, 1.0))
    assert curvature(c, 0.5) == 0.0
    with pytest.raises(InflectionPointError):
        torsion(c, 0.5)
    with pytest.raises(InflectionPointError):
        frenet_frame(c, 0.5)


def test_planar_torsion_vanishes():
    for c in (parabola(), CurveSpec.from_strings("t", "cosh(t)+t^3", "0", (0.0, 1.0))):
        for s in np.linspace(0, 1, 17):
            assert abs(torsion(c, float(s))) <= 1e-12


# -- frame -------------------------------------------------------------------------

def test_frame_examples():
    f = frenet_frame(helix(1.0), 0.0)
    assert f.T == (1.0, 0.0, 1.0)
    assert f.N == pytest.approx((0.0, -1.0, 0.0))
    assert f.B == pytest.approx((0.0, 0.0, -1.0))
    assert (f.kappa, f.tau) == pytest.approx((1.0, 1.0))
    g = frenet_frame(parabola(), 0.0)
    assert g.N == (0.0, 1.0, 0.0)
    assert g.B == (0.0, 0.0, 1.0)
    assert g.causal is None


@pytest.mark.parametrize("make", [lambda: helix(0.5), twisted_cubic, parabola, general_helix])
def test_frame_algebra(make):
    c = make()
    lo, hi = c.t_range
    for t in np.linspace(lo, hi, 33):
        f = frenet_frame(c, float(t))
        assert f.T[0] == 1.0 and f.N[0] == 0.0 and f.B[0] == 0.0
        assert abs(galilean_dot(f.N, f.N) - 1) <= 1e-12
        assert abs(galilean_dot(f.B, f.B) - 1) <= 1e-12
        assert abs(galilean_dot(f.N, f.B)) <= 1e-12


@pytest.mark.parametrize(
    "make, s",
    [(lambda: helix(2.0), 1.0), (lambda: helix(0.5), 4.0), (twisted_cubic, 0.4), (general_helix, 1.2)],
)
def test_frenet_equations_first_order(make, s):
    ratios, r1, _ = convergence_ratios(make(), s, b_sign=-1.0)
    for name, ratio in ratios.items():
        assert 8 <= ratio <= 12, (name, ratio)
        assert r1[name][0] < 1e-2
        assert r1[name][1] == 0.0


# -- motions -----------------------------------------------------------------------

def test_apply_motion_examples():
    p = Vec3G(1.5, -2.0, 0.25)
    assert apply_motion(p, MotionB6(0, 0, 0, 0, 0, 0)) == p
    q = apply_motion(Vec3G(0, 1, 0), MotionB6(0, 0, 0, 0, 0, math.pi / 2))
    assert q == pytest.approx((0, 0, -1), abs=1e-15)
    assert apply_motion(Vec3G(1, 0, 0), MotionB6(3, 0, 2, 0, 5, 0)) == (4, 2, 5)


def test_motion_validation():
    with pytest.raises(ValueError):
        MotionB6.from_sequence([1, 2, 3])
    with pytest.raises(ValueError):
        MotionB6(math.nan, 0, 0, 0, 0, 0)


def test_transform_curve_matches_pointwise_motion():
    c = twisted_cubic()
    m = MotionB6(1.0, -2.0, 0.5, 3.0, -1.5, 0.8)
    moved = transform_curve(c, m)
    for t in np.linspace(0, 1, 100):
        assert moved.point(float(t)) == pytest.approx(apply_motion(c.point(float(t)), m), abs=1e-12)


def test_identity_motion_is_pointwise_identity():
    c = helix(2.0)
    moved = transform_curve(c, MotionB6(0, 0, 0, 0, 0, 0))
    for t in np.linspace(0, 2 * math.pi, 100):
        assert moved.point(float(t)) == pytest.approx(c.point(float(t)), abs=1e-12)


def test_translation_shifts_y():
    c = twisted_cubic()
    moved = transform_curve(c, MotionB6(0, 4.0, 0, 0, 0, 0))
    for t in (0.0, 0.5, 1.0):
        assert eval_scalar(moved.y, t) == pytest.approx(eval_scalar(c.y, t) + 4.0, abs=1e-15)


def test_helix_invariants_under_specific_motion():
    c = helix(2.0)
    moved = transform_curve(c, MotionB6(1, 2, 0, 3, 0, math.pi / 3))
    for t in np.linspace(0, 2 * math.pi, 64):
        _, k0, t0 = curvature_torsion(c, float(t))
        _, k1, t1 = curvature_torsion(moved, float(t))
        assert abs(k0 - k1) < 1e-9 and abs(t0 - t1) < 1e-9


@pytest.mark.parametrize("make", [lambda: helix(1.0), twisted_cubic, general_helix])
def test_random_motion_invariance(make):
    rng = random.Random(11)
    c = make()
    ts = np.linspace(*c.t_range, 12)
    base = [curvature_torsion(c, float(t))[1:] for t in ts]
    for _ in range(100):
        moved = transform_curve(c, random_motion(rng))
        for t, (k0, t0) in zip(ts, base):
            _, k1, t1 = curvature_torsion(moved, float(t))
            assert abs(k0 - k1) < 1e-9 and abs(t0 - t1) < 1e-9


# -- general parameter vs arc length --------------------------------------------------

@pytest.mark.parametrize(
    "x, y, z, direct_y, direct_z, t_range",
    [
        # x = sinh(t), so t = asinh(s)
        ("sinh(t)", "cos(t)", "t^2", "cos(asinh(s))", "asinh(s)^2", (-1.0, 1.0)),
        # x = 2t + 1
        ("2*t + 1", "sin(t)", "cosh(t)", "sin((s-1)/2)", "cosh((s-1)/2)", (0.0, 2.0)),
        # x = exp(t)
        ("exp(t)", "t^3", "sin(t)", "log(s)^3", "sin(log(s))", (-0.5, 0.8)),
    ],
)
def test_general_parameter_agrees_with_arc_length_form(x, y, z, direct_y, direct_z, t_range):
    import sympy as sp

    s = sp.Symbol("s")
    yd = sp.sympify(direct_y)
    zd = sp.sympify(direct_z)
    y2, y3 = sp.diff(yd, s, 2), sp.diff(yd, s, 3)
    z2, z3 = sp.diff(zd, s, 2), sp.diff(zd, s, 3)
    c = CurveSpec.from_strings(x, y, z, t_range)
    for t in np.linspace(*t_range, 7):
        s0, k, tau = curvature_torsion(c, float(t))
        vals = [float(e.subs(s, s0).evalf(30)) for e in (y2, y3, z2, z3)]
        k_ref = math.hypot(vals[0], vals[2])
        tau_ref = (vals[0] * vals[3] - vals[1] * vals[2]) / k_ref**2
        assert k == pytest.approx(k_ref, abs=1e-10)
        assert tau == pytest.approx(tau_ref, abs=1e-10)


def test_decreasing_x_is_flipped():
    c = CurveSpec.from_strings("-t", "t^2/2", "t^3/6", (-1.0, 0.0))
    assert arclength_range(c) == (0.0, 1.0, True)
    t = param_at_arclength(c, 0.5)
    assert t == pytest.approx(-0.5, abs=1e-14)
    # y(s) = s^2/2, z(s) = -s^3/6: same curvature, torsion of opposite sign
    _, k, tau = curvature_torsion(c, t)
    assert k == pytest.approx(math.sqrt(1.25), abs=1e-12)
    assert tau == pytest.approx(-1 / 1.25, abs=1e-12)


def test_param_at_arclength_out_of_range():
    c = CurveSpec.from_strings("t^3 + t", "t", "0", (0.0, 1.0))
    assert param_at_arclength(c, 2.0) == 1.0
    assert eval_scalar(c.x, param_at_arclength(c, 1.0)) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(NotAdmissibleError):
        param_at_arclength(c, 3.0)
