"""Exception hierarchy.

Errors fall in three families which the CLI maps to exit codes:
input problems (1), admissibility failures (2) and numerical failures (3).
"""


class GalicurveError(Exception):
    """Base class for every error raised by this package."""


# -- input ------------------------------------------------------------------

class InputError(GalicurveError):
    pass


class ExprSyntaxError(InputError):
    """Malformed expression source.

    ``offset`` is the 0-based byte offset into the source string.
    """

    def __init__(self, message: str, offset: int, expected: str = "", source: str = ""):
        self.offset = offset
        self.expected = expected
        self.source = source
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownFunctionError(InputError):
    def __init__(self, name: str, offset: int = -1):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown function {name!r}")


class UnboundConstantError(InputError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"named constant {name!r} is not bound")


class SpecSyntaxError(InputError):
    """Unparseable curve-spec file or expression field within one."""

    def __init__(self, path: str, message: str, field: str = "", offset: int = -1):
        self.path = path
        self.field = field
        self.offset = offset
        where = path
        if field:
            where += f", field {field!r}"
        if offset >= 0:
            where += f", offset {offset}"
        super().__init__(f"{where}: {message}")


class IoError(InputError):
    pass


class SchemaError(InputError):
    def __init__(self, field: str, message: str = "missing field"):
        self.field = field
        super().__init__(f"{message}: {field!r}")


# -- admissibility ----------------------------------------------------------

class NotAdmissibleError(GalicurveError):
    pass


class InflectionPointError(NotAdmissibleError):
    """Curvature vanishes, so no principal normal exists."""


class IsotropicNormalError(NotAdmissibleError):
    """Pseudo-Galilean normal direction is isotropic (y''^2 == z''^2)."""


# -- numerical --------------------------------------------------------------

class NumericalError(GalicurveError):
    pass


class DivisionByZero(NumericalError, ZeroDivisionError):
    pass


class DomainError(NumericalError, ValueError):
    pass


class NonInvertibleError(NumericalError):
    pass


class MaxDepthError(NumericalError):
    pass


class VanishingTorsionError(NumericalError):
    pass


class TooFewPointsError(NumericalError, ValueError):
    pass
