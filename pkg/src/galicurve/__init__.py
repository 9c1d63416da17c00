"""Curve geometry in Galilean and pseudo-Galilean 3-space.

Frenet apparatus from exact third-order jets, harmonic curvature, arc
lengths of the tangent/normal/binormal indicatrices, and helix
classification.
"""

from .exprparse import eval_jet, eval_scalar, parse, to_source
from .geometry_g3 import (
    CurveSpec,
    Frame,
    MotionB6,
    Tolerances,
    Vec3G,
    apply_motion,
    check_admissible,
    curvature,
    curve_from_second_derivatives,
    frenet_frame,
    galilean_dot,
    reparameterize,
    torsion,
    transform_curve,
)
from .geometry_pg3 import pg_curvature, pg_dot, pg_frenet_frame, pg_torsion
from .numerics import Jet3, integrate_adaptive
from .spherical_reps import (
    analyze,
    arc_length_B,
    arc_length_N,
    arc_length_T,
    classify,
    fit_linear,
    harmonic_curvature,
    spherical_representation,
)

__version__ = "0.1.0"

__all__ = [
    "eval_jet",
    "eval_scalar",
    "parse",
    "to_source",
    "CurveSpec",
    "Frame",
    "MotionB6",
    "Tolerances",
    "Vec3G",
    "apply_motion",
    "check_admissible",
    "curvature",
    "curve_from_second_derivatives",
    "frenet_frame",
    "galilean_dot",
    "reparameterize",
    "torsion",
    "transform_curve",
    "pg_curvature",
    "pg_dot",
    "pg_frenet_frame",
    "pg_torsion",
    "Jet3",
    "integrate_adaptive",
    "analyze",
    "arc_length_B",
    "arc_length_N",
    "arc_length_T",
    "classify",
    "fit_linear",
    "harmonic_curvature",
    "spherical_representation",
]
