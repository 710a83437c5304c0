"""Exception hierarchy shared by the library and the command line front end."""


class SpectralZetaError(Exception):
    exit_code = 1


class ValidationError(SpectralZetaError, ValueError):
    """Bad input: malformed file, invalid parameter, violated hypothesis."""

    exit_code = 2


class PoleError(ValidationError):
    """A function was evaluated exactly at one of its poles."""


class MissingDataError(ValidationError):
    """A coefficient or zeta value needed by a formula is not available."""


class CrossCheckError(SpectralZetaError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 3

    def __init__(self, message: str, lhs: float = float("nan"), rhs: float = float("nan"), tol: float = float("nan")):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
        self.tol = tol


class PrecisionError(SpectralZetaError, ArithmeticError):
    """A truncation could not be certified to the requested accuracy."""

    exit_code = 4
