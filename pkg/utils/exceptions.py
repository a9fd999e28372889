"""
Error types shared by every tbverify app.
Numerical mismatches are never raised: checks record them in reports.
"""


class GeometryError(Exception):
    """Base class for all geometric failures."""


class DomainError(GeometryError, ValueError):
    """A point lies outside (or too close to the edge of) a chart domain."""


class ChartExitError(DomainError):
    """An integrated geodesic left the chart of its immersion."""


class StencilError(DomainError):
    """A finite-difference stencil does not fit inside the domain."""


class ParameterError(GeometryError, ValueError):
    """Invalid parameters (e.g. 4a = b^2 where a non-space-form ambient is required)."""


class DegeneratePlaneError(GeometryError, ValueError):
    """Two vectors do not span a plane."""


class DegenerateImmersionError(GeometryError, ValueError):
    """The first fundamental form is singular."""


class InvarianceError(GeometryError):
    """An immersion is not invariant under the expected Killing field."""


class UnsupportedAmbientError(GeometryError, NotImplementedError):
    """The ambient model only supports tensor algebra, not a connection."""


class UnknownCaseError(GeometryError, KeyError):
    """A catalog selector did not resolve."""
