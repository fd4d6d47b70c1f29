"""Exception types shared across the package."""


class TilingError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatch(TilingError):
    """Exact and float values were mixed in one computation."""


# Some call sites talk about the backend being wrong rather than mixed;
# it is the same failure mode.
BackendError = BackendMismatch


class DegenerateTriangleError(TilingError):
    """A triangle placement has zero area."""


class NotEquilateralError(TilingError):
    """A triangle placement is not equilateral under backend comparison."""


class OverlapError(TilingError):
    """Two stored triangles have intersecting interiors."""

    def __init__(self, i: int, j: int):
        super().__init__(f"triangles {i} and {j} have overlapping interiors")
        self.i = i
        self.j = j


class WindowError(TilingError):
    """A triangle does not intersect the analysis window."""


class UnknownVertex(TilingError):
    """A queried point is not a vertex of any triangle in the patch."""


class IndeterminateForBoundary(TilingError):
    """A structural query was made on a boundary-marked triangle."""


class PreconditionViolated(TilingError):
    """An operation was called outside its stated precondition."""


class StructureError(TilingError):
    """The patch violates a structural property the operation relies on."""


class NonPositiveSide(TilingError):
    """A generator was given a non-positive side length."""


class DegenerateSpec(TilingError):
    """A generator specification collapses (e.g. coincident defining points)."""


class RangeError(TilingError):
    """A generator index range produces sides outside the resolvable range."""


class ParseError(TilingError):
    """A tiling file is malformed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SqrtNotRepresentable(TilingError):
    """An exact square root does not exist inside the coordinate field."""
