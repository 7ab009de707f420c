"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all geometric failures raised by this package."""


class DegenerateInput(GeometryError):
    """Input point set is not full-dimensional."""


class EmptyIntersection(GeometryError):
    """A halfspace intersection has no interior point."""


class OriginNotInterior(GeometryError):
    """Operation requires the origin strictly inside the body."""


class NonConvergence(GeometryError):
    """A projection iteration exceeded its cap; signals a geometry bug."""


class IllConditioned(GeometryError):
    """A fitted linear system is too ill-conditioned to trust."""


class UnsupportedDimension(GeometryError):
    """Requested computation is outside the supported dimension range."""


class UnsupportedBodyKind(GeometryError):
    """Operation is not defined for this body kind."""


class BudgetTooSmall(GeometryError):
    """Vertex/facet budget below the minimum for a full-dimensional polytope."""


class RejectionStall(GeometryError):
    """Rejection sampler acceptance rate dropped below its floor."""


class OffBoundary(GeometryError):
    """Point expected on the boundary of a body is not."""
