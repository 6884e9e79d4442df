"""Exception types shared across the package.

Everything raised on purpose derives from :class:`RangeGeomError`, so callers
can catch one base class.  The CLI maps configuration errors to exit code 3
and numerical/geometry errors to exit code 4.
"""


class RangeGeomError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateReceiver(RangeGeomError):
    """Two receivers coincide (within tolerance); distances are ill-defined."""


class DimensionMismatch(RangeGeomError):
    """Receiver count/coordinate dimension is wrong for the requested operation."""


class DegenerateConfig(RangeGeomError):
    """Operation requires receivers in general position (non-collinear)."""


class NotCollinear(RangeGeomError):
    """Operation requires an exactly collinear receiver configuration."""


class AtReceiver(RangeGeomError):
    """The query point coincides with a receiver, where the range map is singular."""


class Infeasible(RangeGeomError):
    """Measurements lie outside the feasible set beyond tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals) if residuals else {}


class NotANode(RangeGeomError):
    """The given homogeneous point is not one of the 16 nodes of the surface."""


class UnknownLabel(RangeGeomError):
    """No conic arc or trope carries the requested label."""


class NotOnBoundary(RangeGeomError):
    """The point is not on the boundary of the convex hull of the range surface."""


class InvalidParam(RangeGeomError):
    """Parameter-space point violates the open-domain constraints."""
