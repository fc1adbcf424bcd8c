"""Exception hierarchy shared by all modules."""


class ReachError(Exception):
    """Base class for every error raised by the package."""


class InvalidPolygon(ReachError, ValueError):
    pass


class NotConvex(InvalidPolygon):
    pass


class CollinearVertices(InvalidPolygon):
    pass


class TooFewVertices(InvalidPolygon):
    pass


class DuplicateVertex(InvalidPolygon):
    pass


class CoincidentCircles(ReachError, ValueError):
    pass


class StartOutsidePolygon(ReachError, ValueError):
    pass


class TargetOutsidePolygon(ReachError, ValueError):
    pass


class VertexStart(ReachError, ValueError):
    """A boundary configuration sits on a polygon vertex."""


class PreconditionViolated(ReachError, ValueError):
    pass


class DegenerateInput(ReachError, ValueError):
    pass


class NoWitnessFound(ReachError, RuntimeError):
    """The region claims a point reachable but no witness path validated."""
