"""Exception hierarchy for the fractional Laplacian toolkit."""

from typing import Optional


class NumericalError(Exception):
    """Base exception for numerical failures."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        message = super().__str__()
        if self.stage:
            return f"[{self.stage}] {message}"
        return message


class PoleError(NumericalError):
    """Argument sits on an uncancelled pole."""
    pass


class NoConvergence(NumericalError):
    """Quadrature budget exhausted above tolerance."""
    pass


class NotSimplePole(NumericalError):
    """Residue estimate did not stabilise."""
    pass


class TailTooFat(NumericalError):
    """Contour integrand does not decay within the affordable height."""
    pass


class OutsideStrip(NumericalError):
    """Mellin argument outside the strip of convergence."""
    pass


class StripConflict(NumericalError):
    """No admissible inversion abscissa exists."""
    pass


class ResidualImaginary(NumericalError):
    """A real-valued inversion kept a significant imaginary part."""
    pass


class CosineZero(NumericalError):
    """Cosine factor of the one-dimensional multiplier vanishes."""
    pass


class RouteError(NumericalError):
    """Failure inside one operator route of the equivalence harness."""

    def __init__(self, route: str, cause: Exception):
        super().__init__(f"route '{route}' failed: {cause}", stage=route)
        self.route = route
        self.cause = cause


class UnsupportedInput(ValueError):
    """Input violates an operation's preconditions."""
    pass


class DimensionUnsupported(UnsupportedInput):
    """Route not available in the requested dimension."""
    pass


class ParameterOutOfRange(UnsupportedInput):
    """Parameter outside the range where the operation converges."""
    pass
