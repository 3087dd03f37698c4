"""Exception hierarchy shared by the geometry, dynamics and locus modules."""


class PonceletError(Exception):
    """Base class for every error raised by ponceletkit."""


class GeometryError(PonceletError, ValueError):
    pass


class NonPositiveAxis(GeometryError):
    pass


class NotOnConic(GeometryError):
    pass


class PointAtInfinity(GeometryError):
    pass


class SingularConic(GeometryError):
    pass


class NotACircle(GeometryError):
    pass


class InteriorPoint(GeometryError):
    pass


class DynamicsError(PonceletError):
    pass


class VertexInsideInner(DynamicsError):
    pass


class QuadratureFailure(DynamicsError):
    pass


class NoBracket(DynamicsError):
    pass


class Degenerate(DynamicsError):
    pass


class NotCertified(DynamicsError):
    pass


class CenterError(PonceletError, ValueError):
    pass


class ZeroPerimeter(CenterError):
    pass


class ZeroSignedArea(CenterError):
    pass


class EdgeNotTangent(CenterError):
    def __init__(self, index: int, defect: float):
        self.index = index
        self.defect = defect
        super().__init__(f"edge {index} is not tangent to the inner conic (defect {defect:.3e})")


class CollinearPoints(PonceletError, ValueError):
    pass


class LocusError(PonceletError):
    """A dynamics or centroid failure while sampling a locus; carries the parameter ``t``."""

    def __init__(self, t: float, cause: Exception):
        self.t = t
        self.cause = cause
        super().__init__(f"at t={t!r}: {type(cause).__name__}: {cause}")


class ConfigParse(PonceletError):
    pass


class MissingFamily(PonceletError):
    pass
