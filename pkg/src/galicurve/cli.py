"""Command-line front end.

Usage::

    galicurve analyze  --input helix.json --output helix.csv [--format csv|json]
    galicurve classify --input helix.json [--tol 1e-6] [--output report.json]
    galicurve frame    --input helix.json --at 0
    galicurve repr     --input helix.json --which T --output tangent.csv
    galicurve motion   --input helix.json --params=1,2,0,3,0,1.047 --output moved.json

Exit codes: 0 success, 1 input error, 2 curve not admissible, 3 numerical
failure.  No output file is written on error.  ``GALICURVE_TOL`` sets the
default constancy tolerance used by ``classify``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ExprSyntaxError,
    InputError,
    IoError,
    NotAdmissibleError,
    NumericalError,
    SchemaError,
    SpecSyntaxError,
    UnboundConstantError,
    UnknownFunctionError,
)
from .exprparse import parse, to_source
from .geometry_g3 import (
    GEOMETRIES,
    CurveSpec,
    MotionB6,
    Tolerances,
    check_admissible,
    param_at_arclength,
    transform_curve,
)
from .spherical_reps import analyze, classify, frame

log = logging.getLogger("galicurve")

COMMANDS = ("analyze", "classify", "frame", "repr", "motion")
ANALYZE_COLUMNS = ("s", "kappa", "tau", "H", "s_T", "s_N", "s_B")
ENV_TOL = "GALICURVE_TOL"


@dataclass
class JobConfig:
    command: str
    input: str
    output: str | None = None
    format: str = "csv"
    tol: float | None = None
    motion: MotionB6 | None = None
    at: float | None = None
    which: str = "T"


# ---------------------------------------------------------------------------
# input

def load_curve_spec(path: str) -> CurveSpec:
    """Read a JSON curve-spec document.

    Required fields are ``x``, ``y``, ``z`` (expression strings) and
    ``t_range``; ``geometry``, ``samples``, ``constants`` and
    ``tolerances`` are optional.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(path, exc.msg, offset=exc.pos) from exc
    if not isinstance(doc, dict):
        raise SchemaError("<document>", "curve spec must be a JSON object")

    exprs = {}
    for key in ("x", "y", "z"):
        if key not in doc:
            raise SchemaError(key)
        if not isinstance(doc[key], str):
            raise SchemaError(key, "expression must be a string")
        try:
            exprs[key] = parse(doc[key])
        except ExprSyntaxError as exc:
            raise SpecSyntaxError(path, str(exc), key, exc.offset) from exc
        except UnknownFunctionError as exc:
            raise SpecSyntaxError(path, str(exc), key, exc.offset) from exc

    if "t_range" not in doc:
        raise SchemaError("t_range")
    t_range = doc["t_range"]
    if (
        not isinstance(t_range, list) or len(t_range) != 2
        or not all(_is_number(v) for v in t_range)
    ):
        raise SchemaError("t_range", "must be an array of two numbers")

    geometry = doc.get("geometry", "galilean")
    if geometry not in GEOMETRIES:
        raise SchemaError("geometry", f"must be one of {', '.join(GEOMETRIES)}")
    samples = doc.get("samples", 256)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 8:
        raise SchemaError("samples", "must be an integer >= 8")
    constants = doc.get("constants", {})
    if not isinstance(constants, dict) or not all(_is_number(v) for v in constants.values()):
        raise SchemaError("constants", "must be an object of numbers")
    tol_doc = doc.get("tolerances", {})
    if not isinstance(tol_doc, dict):
        raise SchemaError("tolerances", "must be an object")
    unknown = set(tol_doc) - {"eps", "quad", "constancy", "linearity"}
    if unknown:
        raise SchemaError(f"tolerances.{sorted(unknown)[0]}", "unknown tolerance")
    if not all(_is_number(v) and v > 0 for v in tol_doc.values()):
        raise SchemaError("tolerances", "tolerances must be positive numbers")

    try:
        spec = CurveSpec(
            exprs["x"], exprs["y"], exprs["z"], tuple(t_range),
            geometry=geometry, constants=constants, samples=samples,
            tol=Tolerances(**tol_doc),
        )
    except ValueError as exc:
        raise SchemaError("t_range" if "t_range" in str(exc) else "constants", str(exc)) from exc
    unbound = spec.unbound_names()
    if unbound:
        raise UnboundConstantError(sorted(unbound)[0])

    report = check_admissible(spec)
    if not report.ok:
        log.warning("%s: curve is not admissible everywhere: %s", path, report.summary())
    return spec


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


# ---------------------------------------------------------------------------
# output

def fmt(x: float) -> str:
    """12 significant digits, locale independent; blank for NaN."""
    if x is None or not math.isfinite(x):
        return ""
    return format(x + 0.0, ".12g")


def _jsonable(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(format(x + 0.0, ".12g")) if math.isfinite(x) else None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path: str | None, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".galicurve-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# commands

def _analysis_text(spec: CurveSpec, fmt_name: str) -> str:
    a = analyze(spec)
    if fmt_name == "csv":
        return _csv_text(ANALYZE_COLUMNS, a.rows())
    cols = dict(zip(ANALYZE_COLUMNS, (a.s, a.kappa, a.tau, a.H, a.sT, a.sN, a.sB)))
    return dumps({
        "geometry": a.geometry,
        "columns": {k: list(v) for k, v in cols.items()},
        "signed_tau_integral": a.signed_tau_integral,
        "flipped": a.flipped,
        "isotropic_points": a.isotropic_points,
        "notes": a.notes,
    })


def _frame_text(spec: CurveSpec, at: float) -> str:
    t = param_at_arclength(spec, at)
    fr = frame(spec, t)
    out = {
        "s": at,
        "t": t,
        "T": list(fr.T),
        "N": list(fr.N),
        "B": list(fr.B),
        "kappa": fr.kappa,
        "tau": fr.tau,
    }
    if fr.causal is not None:
        out["causal"] = dict(zip(("T", "N", "B"), fr.causal))
    return dumps(out)


def _repr_text(spec: CurveSpec, which: str) -> str:
    a = analyze(spec)
    arc = {"T": a.sT, "N": a.sN, "B": a.sB}[which]
    rows = []
    for i, t in enumerate(a.t):
        if not math.isfinite(a.kappa[i]):
            continue
        v = getattr(frame(spec, float(t)), which)
        rows.append((a.s[i], v[0], v[1], v[2], arc[i]))
    return _csv_text(("s", "x1", "x2", "x3", f"s_{which}"), rows)


def _motion_text(spec: CurveSpec, m: MotionB6) -> str:
    moved = transform_curve(spec, m)
    doc = {
        "geometry": moved.geometry,
        "x": to_source(moved.x),
        "y": to_source(moved.y),
        "z": to_source(moved.z),
        "t_range": list(moved.t_range),
        "samples": moved.samples,
        "constants": dict(moved.constants),
        "tolerances": {
            "eps": moved.tol.eps, "quad": moved.tol.quad,
            "constancy": moved.tol.constancy, "linearity": moved.tol.linearity,
        },
    }
    # expressions are written with full precision; only numbers are rounded
    return json.dumps(doc, indent=2) + "\n"


def run(job: JobConfig) -> int:
    """Execute ``job``; returns the process exit code."""
    try:
        if job.command not in COMMANDS:
            raise InputError(f"unknown command {job.command!r}")
        if job.tol is not None and not job.tol > 0:
            raise InputError("--tol must be positive")
        spec = load_curve_spec(job.input)
        if job.command == "analyze":
            text = _analysis_text(spec, job.format)
        elif job.command == "classify":
            if job.tol is not None:
                spec = replace(spec, tol=replace(spec.tol, constancy=job.tol))
            text = dumps(classify(spec).to_dict())
        elif job.command == "frame":
            if job.at is None:
                raise InputError("frame needs --at")
            text = _frame_text(spec, job.at)
        elif job.command == "repr":
            text = _repr_text(spec, job.which)
        else:
            if job.motion is None:
                raise InputError("motion needs --params")
            text = _motion_text(spec, job.motion)
        write_atomic(job.output, text)
    except NotAdmissibleError as exc:
        print(f"galicurve: not admissible: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"galicurve: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (InputError, OSError) as exc:
        print(f"galicurve: input error: {exc}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _motion_arg(text: str) -> MotionB6:
    try:
        return MotionB6.from_sequence(text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _env_tol() -> float | None:
    raw = os.environ.get(ENV_TOL)
    if raw is None or raw == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise InputError(f"{ENV_TOL} is not a number: {raw!r}") from None
    if not value > 0:
        raise InputError(f"{ENV_TOL} must be positive")
    return value


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); argparse's own 2 means "not admissible" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="galicurve",
        description="Frenet apparatus and helix classification of curves in "
        "Galilean and pseudo-Galilean 3-space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="sample kappa, tau, H and indicatrix arc lengths")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("classify", help="helix classification report (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, help="constancy tolerance (relative dispersion)")
    p.add_argument("--output")

    p = sub.add_parser("frame", help="Frenet frame at an arc-length value (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--at", type=float, required=True, help="arc length s")
    p.add_argument("--output")

    p = sub.add_parser("repr", help="spherical representation of T, N or B (CSV)")
    p.add_argument("--input", required=True)
    p.add_argument("--which", choices=("T", "N", "B"), required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("motion", help="apply a Galilean motion, write the moved curve spec")
    p.add_argument("--input", required=True)
    p.add_argument("--params", type=_motion_arg, required=True, help="a,b,c,d,e,phi (phi in radians)")
    p.add_argument("--output", required=True)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="galicurve: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        env_tol = _env_tol()
    except InputError as exc:
        print(f"galicurve: input error: {exc}", file=sys.stderr)
        return 1
    job = JobConfig(
        command=args.command,
        input=args.input,
        output=getattr(args, "output", None),
        format=getattr(args, "format", "csv"),
        tol=getattr(args, "tol", None) if getattr(args, "tol", None) is not None else env_tol,
        motion=getattr(args, "params", None),
        at=getattr(args, "at", None),
        which=getattr(args, "which", "T"),
    )
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
