"""Exception hierarchy.

Degenerate geometry raises instead of propagating NaN; every error carries the
parameter value (when there is one) and the quantity that vanished.
"""


class SemiQuatError(ValueError):
    """Base class for all package errors."""

    def __init__(self, message, *, s=None, quantity=None):
        self.s = s
        self.quantity = quantity
        if s is not None:
            message = f"{message} (at s={float(s)!r})"
        super().__init__(message)


class NullVectorError(SemiQuatError):
    """A causal sign was requested for a null vector."""


class NonSpatialInput(SemiQuatError):
    pass


class MetricError(SemiQuatError):
    """Invalid metric configuration."""


class OutOfDomain(SemiQuatError):
    pass


class StencilOverflow(SemiQuatError):
    pass


class NullSpeedPoint(SemiQuatError):
    pass


class NotUnitSpeed(SemiQuatError):
    pass


class NullCurvatureVector(SemiQuatError):
    pass


class DegenerateFrame(SemiQuatError):
    pass


class SingularInvolutePoint(SemiQuatError):
    pass


class DegenerateTransfer(SemiQuatError):
    pass


class NotWCurve(SemiQuatError):
    pass


class ExtractionFailure(SemiQuatError):
    pass


class NonSpatialCurve(SemiQuatError):
    pass


class ConfigError(SemiQuatError):
    pass
