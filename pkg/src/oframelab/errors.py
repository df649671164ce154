"""Exception types shared across the package."""


class SpaceMismatchError(ValueError):
    """Coordinates, spaces, or shapes do not conform."""


class CertificationError(RuntimeError):
    """An exact norm was required but only an estimate is available."""


class BoundViolation(RuntimeError):
    """A certified bound check failed; carries the offending witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InfeasibleApproximation(RuntimeError):
    """The requested finite-rank approximation cannot meet its tolerance."""
