"""Exception types shared across the package."""


class SlhkitError(Exception):
    """Base class for all slhkit errors."""


class BadParam(SlhkitError, ValueError):
    """A constructor or builder was given invalid parameters."""


class ShapeError(SlhkitError, ValueError):
    """Matrix dimensions are inconsistent with the declared structure."""


class SingularMatrix(SlhkitError):
    """Inversion refused: estimated condition number above the limit."""

    def __init__(self, message, cond_estimate=None):
        super().__init__(message)
        self.cond_estimate = cond_estimate


class ResolventSingular(SingularMatrix):
    """A resolvent (s - K)^-1 failed; s is at or near the spectrum of K."""

    def __init__(self, s, message=None, cond_estimate=None):
        msg = message or f"resolvent singular at s = {s}"
        super().__init__(msg, cond_estimate)
        self.s = s


class CayleySingular(SlhkitError):
    """S has an eigenvalue at -1; no Stratonovich coefficients exist."""


class InvalidCoefficients(SlhkitError, ValueError):
    """Stratonovich coefficients violate their Hermiticity requirements."""


class InvalidFamily(SlhkitError, ValueError):
    """A scaled family violates the required slow/fast block structure."""


class AssumptionViolated(SlhkitError):
    """A limit was requested for a family that fails its assumptions."""


class NoClosedForm(SlhkitError, KeyError):
    """The requested zoo entry has no printed closed-form oracle."""
