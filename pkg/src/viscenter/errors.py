"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class InvalidPolygon(GeometryError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TooFewVertices(InvalidPolygon):
    pass


class SelfIntersecting(InvalidPolygon):
    pass


class DuplicateConsecutiveVertex(InvalidPolygon):
    pass


class PointOutsidePolygon(GeometryError):
    pass


class DegenerateDirection(GeometryError):
    pass


class SingleTriangle(GeometryError):
    """Raised when a balanced split is requested on a single triangle."""


class NotReflex(GeometryError):
    pass


class NotVisible(GeometryError):
    pass


class UnsortedInput(GeometryError):
    pass


class EmptyCover(GeometryError):
    pass


class ZeroRadius(GeometryError):
    pass


class EmptyConstraintSet(GeometryError):
    pass


class EmptySiteSet(GeometryError):
    pass


class GrazingWindow(NotVisible):
    """The line from the source through the reflex vertex only touches the boundary."""


class InvalidInstance(GeometryError):
    """An instance or result file that does not match its schema."""
