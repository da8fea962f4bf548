"""Exception hierarchy shared by every capstab module."""


class CapstabError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CapstabError, ValueError):
    """Argument outside the domain of a closed-form map."""


class ConstructionError(CapstabError):
    """A meridian or surface could not be constructed for the requested data."""


class AxisContactError(ConstructionError):
    """The meridian reached the rotation axis, where the ODE is singular."""


class ContainmentError(ConstructionError):
    """The meridian never meets the unit sphere (or starts outside the ball)."""


class NotCapillaryError(ConstructionError):
    """Contact angles at the boundary rings disagree."""


class DegenerateAngleError(ConstructionError):
    """Contact angle too close to 0 or pi."""


class OrientationError(CapstabError):
    """Normal convention inconsistent with the wetted side or the contact angle."""


class PrecisionError(CapstabError):
    """Quadrature failed to converge under grid halving."""


class NotApplicableError(CapstabError):
    """Check preconditions are not met by the given surface."""
