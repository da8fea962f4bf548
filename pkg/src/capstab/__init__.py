"""Stability of capillary hypersurfaces of revolution in the unit ball."""
from .delaunay import DelaunayKind, MeridianCurve, MeridianState, classify, integrate, symmetric_segment
from .errors import (AxisContactError, CapstabError, ConstructionError, ContainmentError,
                     DegenerateAngleError, DomainError, NotApplicableError, NotCapillaryError,
                     OrientationError, PrecisionError)
from .report import analyze
from .stability import StabilityForm, StabilityReport, Verdict, q_form, verdict
from .surface import RotationalCapillarySurface, WettedRegion, from_delaunay, from_parameters

__all__ = [
    "AxisContactError", "CapstabError", "ConstructionError", "ContainmentError", "DegenerateAngleError",
    "DelaunayKind", "DomainError", "MeridianCurve", "MeridianState", "NotApplicableError",
    "NotCapillaryError", "OrientationError", "PrecisionError", "RotationalCapillarySurface",
    "StabilityForm", "StabilityReport", "Verdict", "WettedRegion", "analyze", "classify",
    "from_delaunay", "from_parameters", "integrate", "q_form", "symmetric_segment", "verdict",
]
