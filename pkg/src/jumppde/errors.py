"""Exception hierarchy shared across the package."""


class JumpPDEError(Exception):
    """Base class for all errors raised by this package."""


class ConditionNotMet(JumpPDEError):
    """The pre-maturity limit boundary does not exist for these parameters."""


class InvalidSpec(JumpPDEError):
    """A contract or grid specification violates its invariants."""


class MassTooLow(JumpPDEError):
    """Discretized jump density loses too much mass to truncation."""


class DimensionMismatch(JumpPDEError):
    """Array arguments have incompatible shapes."""


class MeshTooCoarse(JumpPDEError):
    """Scheme coefficients lose positivity; refine dx or dt."""


class NoConvergence(JumpPDEError):
    """An iterative solver exhausted its iteration budget.

    Carries an optional ``report`` attribute with per-iteration diagnostics.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidStructure(JumpPDEError):
    """Matrix bands violate the sign pattern a solver requires."""


class SingularMatrix(JumpPDEError):
    """Tridiagonal elimination hit a vanishing pivot."""


class WrongModel(JumpPDEError):
    """An analytic routine was called with an unsupported model variant."""


class ConfigError(JumpPDEError):
    """A run-configuration file failed validation."""
