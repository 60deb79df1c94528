"""Exception hierarchy shared by every module of the package."""


class MeshError(Exception):
    """Base class for all mesh errors raised by this package."""


class NonManifoldEdge(MeshError):
    """An undirected edge is shared by more than two triangles, or by two
    triangles that cannot be oriented consistently."""


class DegenerateTriangle(MeshError):
    """A triangle has zero signed area or a repeated vertex."""


class DanglingIndex(MeshError):
    """A vertex index is outside the point array."""


class InfiniteWalk(MeshError):
    """A boundary walk exceeded the half-edge count (bad frontier labels)."""


class InfiniteRotation(MeshError):
    """A rotation around a vertex found no frontier edge."""


class NoFrontierFound(MeshError):
    """A barrier tip has no usable frontier edge or no interior middle edge."""


class CycleDetected(MeshError):
    """A longest-edge propagation path revisited a triangle."""


class TooFewPoints(MeshError):
    """A generator was asked for fewer points than it can triangulate."""


class DuplicatePoint(MeshError):
    """Two generated points coincide after snapping."""


class ParseError(MeshError):
    """A mesh file could not be parsed."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class IndexBaseAmbiguous(ParseError):
    """Element indices fit neither 0-based nor 1-based numbering."""


class VersionMismatch(ParseError):
    """A half-edge dump carries an unsupported version header."""


class TooLarge(MeshError):
    """A mesh exceeds the element budget of a renderer."""
