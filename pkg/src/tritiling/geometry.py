"""Scalar backends and robust predicates on points, segments and triangles.

Coordinates come in two interchangeable backends:

* exact: elements u + v*sqrt(3) with rational u, v held as ``Fraction``.
  The field is closed under +, -, * and division by nonzero elements
  (sqrt(3)*sqrt(3) folds into the rational part), and sign is decidable
  without floating point, so every predicate below is exact.
* float: IEEE doubles with a relative comparison tolerance eps.  Two
  values compare equal when ``|x - y| <= eps * max(1, |x|, |y|)``.
  Predicates normalise by the natural scale of their inputs before
  testing signs, so they behave sensibly across very different
  coordinate magnitudes.

Values from different backends must not meet in one expression; doing so
raises :class:`~tritiling.errors.BackendMismatch`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import (
    BackendMismatch,
    DegenerateTriangleError,
    NotEquilateralError,
    SqrtNotRepresentable,
)

SQRT3 = 1.7320508075688772
DEFAULT_EPS = 1e-9

RationalLike = Union[int, Fraction]


def _frac_sqrt(f: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class ExactScalar:
    """An element u + v*sqrt(3) of Q(sqrt 3) with exact arithmetic."""

    __slots__ = ("u", "v")
    is_exact = True

    def __init__(self, u: RationalLike = 0, v: RationalLike = 0):
        self.u = Fraction(u)
        self.v = Fraction(v)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "ExactScalar | None":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(other)
        if isinstance(other, FloatScalar):
            raise BackendMismatch("cannot mix exact and float scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(o.u - self.u, o.v - self.v)

    def __neg__(self):
        return ExactScalar(-self.u, -self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.u * o.u + 3 * self.v * o.v,
                           self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # multiply by the conjugate; the norm u^2 - 3 v^2 vanishes only at 0
        norm = o.u * o.u - 3 * o.v * o.v
        if norm == 0:
            raise ZeroDivisionError("division by zero exact scalar")
        return self * ExactScalar(o.u / norm, -o.v / norm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- comparison -------------------------------------------------------

    def sign(self) -> int:
        """Sign of u + v*sqrt(3), computed without floating point."""
        u, v = self.u, self.v
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return (v > 0) - (v < 0)
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        # opposite signs: |u| vs |v|*sqrt(3) decided by u^2 vs 3 v^2
        d = u * u - 3 * v * v
        s = (d > 0) - (d < 0)
        return s if u > 0 else -s

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        return self._coerce(other).__lt__(self)

    def __ge__(self, other):
        return self._coerce(other).__le__(self)

    def __hash__(self):
        return hash((self.u, self.v))

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    # -- misc ---------------------------------------------------------------

    def sqrt(self) -> "ExactScalar":
        """Exact square root, when it exists inside Q(sqrt 3).

        (p + q*sqrt 3)^2 = p^2 + 3 q^2 + 2 p q * sqrt 3, so a root exists
        iff the resulting rational conditions have rational-square
        solutions.  Raises SqrtNotRepresentable otherwise.
        """
        if self.sign() < 0:
            raise SqrtNotRepresentable("negative value")
        u, v = self.u, self.v
        if v == 0:
            r = _frac_sqrt(u)
            if r is not None:
                return ExactScalar(r, 0)
            r = _frac_sqrt(u / 3)
            if r is not None:
                return ExactScalar(0, r)
            raise SqrtNotRepresentable(f"sqrt of {self!r} not in field")
        d = _frac_sqrt(u * u - 3 * v * v)
        if d is not None:
            for p2 in ((u + d) / 2, (u - d) / 2):
                p = _frac_sqrt(p2)
                if p is not None and p != 0:
                    q = v / (2 * p)
                    cand = ExactScalar(p, q)
                    if cand.sign() >= 0 and cand * cand == self:
                        return cand
                    cand = -cand
                    if cand.sign() >= 0 and cand * cand == self:
                        return cand
        raise SqrtNotRepresentable(f"sqrt of {self!r} not in field")

    def to_float(self) -> float:
        return float(self.u) + float(self.v) * SQRT3

    def sort_key(self):
        """Deterministic structural key (lexicographic on (u, v))."""
        return (self.u, self.v)

    def __repr__(self):
        if self.v == 0:
            return f"exact({self.u})"
        return f"exact({self.u}, {self.v})"


class FloatScalar:
    """A double with a relative comparison tolerance."""

    __slots__ = ("x", "eps")
    is_exact = False

    def __init__(self, x: float, eps: float = DEFAULT_EPS):
        self.x = float(x)
        self.eps = float(eps)

    def _coerce(self, other) -> "FloatScalar | None":
        if isinstance(other, FloatScalar):
            return other
        if isinstance(other, (int, float)):
            return FloatScalar(other, self.eps)
        if isinstance(other, ExactScalar):
            raise BackendMismatch("cannot mix exact and float scalars")
        return None

    def _eps(self, o: "FloatScalar") -> float:
        return self.eps if self.eps >= o.eps else o.eps

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.x + o.x, self._eps(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.x - o.x, self._eps(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(o.x - self.x, self._eps(o))

    def __neg__(self):
        return FloatScalar(-self.x, self.eps)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.x * o.x, self._eps(o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.x / o.x, self._eps(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(o.x / self.x, self._eps(o))

    def sign(self) -> int:
        # |x - 0| <= eps * max(1, |x|) reduces to |x| <= eps
        if abs(self.x) <= self.eps:
            return 0
        return 1 if self.x > 0 else -1

    def sign_within(self, scale: float) -> int:
        """Sign with the zero band widened to eps * scale."""
        if abs(self.x) <= self.eps * scale:
            return 0
        return 1 if self.x > 0 else -1

    def is_zero(self) -> bool:
        return self.sign() == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tol = self._eps(o) * max(1.0, abs(self.x), abs(o.x))
        return abs(self.x - o.x) <= tol

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tol = self._eps(o) * max(1.0, abs(self.x), abs(o.x))
        return o.x - self.x > tol

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not o.__lt__(self)

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__lt__(self)

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not self.__lt__(o)

    __hash__ = None  # tolerance-based equality cannot hash consistently

    def __abs__(self):
        return FloatScalar(abs(self.x), self.eps)

    def sqrt(self) -> "FloatScalar":
        if self.x < 0:
            if self.sign() < 0:
                raise ValueError("sqrt of negative float scalar")
            return FloatScalar(0.0, self.eps)
        return FloatScalar(math.sqrt(self.x), self.eps)

    def to_float(self) -> float:
        return self.x

    def sort_key(self):
        return self.x

    def __repr__(self):
        return f"approx({self.x!r})"


Scalar = Union[ExactScalar, FloatScalar]


def exact(u: RationalLike = 0, v: RationalLike = 0) -> ExactScalar:
    """Convenience constructor for u + v*sqrt(3)."""
    return ExactScalar(u, v)


def approx(x: float, eps: float = DEFAULT_EPS) -> FloatScalar:
    """Convenience constructor for a tolerant double."""
    return FloatScalar(x, eps)


def common_backend(*scalars: Scalar) -> str:
    """'exact' or 'float'; raises BackendMismatch on a mix."""
    kinds = {s.is_exact for s in scalars}
    if len(kinds) != 1:
        raise BackendMismatch("mixed exact and float values")
    return "exact" if kinds.pop() else "float"


def _one_like(s: Scalar) -> Scalar:
    return ExactScalar(1) if s.is_exact else FloatScalar(1.0, s.eps)


def _zero_like(s: Scalar) -> Scalar:
    return ExactScalar(0) if s.is_exact else FloatScalar(0.0, s.eps)


class Point:
    """A point with both coordinates in one backend."""

    __slots__ = ("x", "y")

    def __init__(self, x: Scalar, y: Scalar):
        common_backend(x, y)
        self.x = x
        self.y = y

    @property
    def backend(self) -> str:
        return "exact" if self.x.is_exact else "float"

    @property
    def is_exact(self) -> bool:
        return self.x.is_exact

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    __hash__ = None

    def to_floats(self) -> tuple[float, float]:
        return (self.x.to_float(), self.y.to_float())

    def sort_key(self):
        return (self.x.sort_key(), self.y.sort_key())

    def translate(self, dx: Scalar, dy: Scalar) -> "Point":
        return Point(self.x + dx, self.y + dy)

    def __repr__(self):
        return f"Point({self.x!r}, {self.y!r})"


def ex_point(x, y) -> Point:
    """Exact point from rationals or (u, v) pairs."""
    def lift(c):
        if isinstance(c, ExactScalar):
            return c
        if isinstance(c, tuple):
            return ExactScalar(*c)
        return ExactScalar(c)
    return Point(lift(x), lift(y))


def fl_point(x: float, y: float, eps: float = DEFAULT_EPS) -> Point:
    return Point(FloatScalar(x, eps), FloatScalar(y, eps))


def _sub(p: Point, q: Point) -> tuple[Scalar, Scalar]:
    return (p.x - q.x, p.y - q.y)


def _cross_sign(ex_, ey_, fx_, fy_) -> int:
    """Sign of the cross product e x f, scale-normalised for floats."""
    val = ex_ * fy_ - ey_ * fx_
    if val.is_exact:
        return val.sign()
    ref = (ex_ * ex_ + ey_ * ey_ + fx_ * fx_ + fy_ * fy_).x
    return val.sign_within(ref)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the doubled signed area of (p, q, r): +1 ccw, -1 cw, 0 collinear."""
    common_backend(p.x, q.x, r.x)
    ex_, ey_ = _sub(q, p)
    fx_, fy_ = _sub(r, p)
    return _cross_sign(ex_, ey_, fx_, fy_)


Segment = tuple[Point, Point]


def point_in_segment_interior(p: Point, s: Segment) -> bool:
    """True iff p is collinear with s and strictly between its endpoints."""
    a, b = s
    ex_, ey_ = _sub(b, a)
    if ex_.is_zero() and ey_.is_zero():
        raise ValueError("segment endpoints coincide")
    fx_, fy_ = _sub(p, a)
    if _cross_sign(ex_, ey_, fx_, fy_) != 0:
        return False
    length2 = ex_ * ex_ + ey_ * ey_
    t = (ex_ * fx_ + ey_ * fy_) / length2
    one = _one_like(t)
    return t.sign() > 0 and (one - t).sign() > 0


def _segment_param(a: Point, ex_, ey_, length2, p: Point) -> Scalar:
    fx_, fy_ = _sub(p, a)
    return (ex_ * fx_ + ey_ * fy_) / length2


def collinear_overlap(s1: Segment, s2: Segment) -> Segment | None:
    """Common sub-segment of two collinear segments, when it has positive length."""
    a, b = s1
    c, d = s2
    ex_, ey_ = _sub(b, a)
    length2 = ex_ * ex_ + ey_ * ey_
    if length2.is_zero():
        raise ValueError("segment endpoints coincide")
    fx_, fy_ = _sub(c, a)
    gx_, gy_ = _sub(d, a)
    if _cross_sign(ex_, ey_, fx_, fy_) != 0 or _cross_sign(ex_, ey_, gx_, gy_) != 0:
        return None
    t0 = (ex_ * fx_ + ey_ * fy_) / length2
    t1 = (ex_ * gx_ + ey_ * gy_) / length2
    if (t1 - t0).sign() < 0:
        t0, t1 = t1, t0
    zero, one = _zero_like(t0), _one_like(t0)
    lo = t0 if t0.sign() > 0 else zero
    hi = t1 if (one - t1).sign() > 0 else one
    if (hi - lo).sign() <= 0:
        return None
    p_lo = Point(a.x + lo * ex_, a.y + lo * ey_)
    p_hi = Point(a.x + hi * ex_, a.y + hi * ey_)
    return (p_lo, p_hi)


class TrianglePlacement:
    """An equilateral triangle given by three vertices in ccw order.

    Vertices supplied clockwise are silently reordered.  Degenerate
    placements raise DegenerateTriangleError and non-equilateral ones
    NotEquilateralError.
    """

    __slots__ = ("v0", "v1", "v2")

    def __init__(self, v0: Point, v1: Point, v2: Point):
        common_backend(v0.x, v1.x, v2.x)
        s = orient(v0, v1, v2)
        if s == 0:
            raise DegenerateTriangleError(f"zero area: {v0!r}, {v1!r}, {v2!r}")
        if s < 0:
            v1, v2 = v2, v1
        self.v0, self.v1, self.v2 = v0, v1, v2
        d01 = _sq_dist(v0, v1)
        d12 = _sq_dist(v1, v2)
        d20 = _sq_dist(v2, v0)
        if not (_sq_close(d01, d12) and _sq_close(d12, d20)):
            raise NotEquilateralError(
                f"side lengths differ: {d01!r}, {d12!r}, {d20!r}")

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.v0, self.v1, self.v2)

    @property
    def backend(self) -> str:
        return self.v0.backend

    def edges(self) -> tuple[Segment, Segment, Segment]:
        return ((self.v0, self.v1), (self.v1, self.v2), (self.v2, self.v0))

    def sq_side(self) -> Scalar:
        return _sq_dist(self.v0, self.v1)

    def side_length(self) -> Scalar:
        return self.sq_side().sqrt()

    def canonicalized(self) -> "TrianglePlacement":
        """Rotate so v0 is the lexicographically smallest vertex."""
        vs = self.vertices
        k = min(range(3), key=lambda i: vs[i].sort_key())
        if k == 0:
            return self
        return TrianglePlacement(vs[k], vs[(k + 1) % 3], vs[(k + 2) % 3])

    def translate(self, dx: Scalar, dy: Scalar) -> "TrianglePlacement":
        return TrianglePlacement(self.v0.translate(dx, dy),
                                 self.v1.translate(dx, dy),
                                 self.v2.translate(dx, dy))

    def sort_key(self):
        return tuple(c.sort_key() for v in self.vertices for c in (v.x, v.y))

    def __eq__(self, other):
        if not isinstance(other, TrianglePlacement):
            return NotImplemented
        return all(a == b for a, b in zip(self.vertices, other.vertices))

    __hash__ = None

    def __repr__(self):
        return f"TrianglePlacement({self.v0!r}, {self.v1!r}, {self.v2!r})"


def _sq_dist(p: Point, q: Point) -> Scalar:
    dx, dy = _sub(p, q)
    return dx * dx + dy * dy


def _sq_close(d1: Scalar, d2: Scalar) -> bool:
    """Relative comparison of two nonnegative squared lengths."""
    diff = d1 - d2
    if diff.is_exact:
        return diff.sign() == 0
    return diff.sign_within((d1 + d2).x) == 0


def _separates(ta: TrianglePlacement, tb: TrianglePlacement, strict: bool) -> bool:
    """Some edge line of ``ta`` has all of ``tb`` on its outside.

    With ``strict`` False, points on the line count as outside, which makes
    the test a witness for disjoint open interiors.  With ``strict`` True
    the gap must be positive, witnessing disjoint closed triangles.
    """
    limit = -1 if strict else 0
    for a, b in ta.edges():
        ex_, ey_ = _sub(b, a)
        if all(_cross_sign(ex_, ey_, *(_sub(p, a))) <= limit
               for p in tb.vertices):
            return True
    return False


def interiors_intersect(t1: TrianglePlacement, t2: TrianglePlacement) -> bool:
    """True iff the open triangles intersect; boundary contact is not enough.

    Separating-axis test over the six edge directions.  Exact in the exact
    backend; scale-normalised sign tests in the float backend.
    """
    return not (_separates(t1, t2, strict=False) or
                _separates(t2, t1, strict=False))


def closed_triangles_intersect(t1: TrianglePlacement, t2: TrianglePlacement) -> bool:
    """True iff the closed triangles share at least one point."""
    return not (_separates(t1, t2, strict=True) or
                _separates(t2, t1, strict=True))


def shares_full_side(t1: TrianglePlacement, t2: TrianglePlacement) -> bool:
    """True iff some edge of t1 equals some edge of t2 as an unordered pair."""
    for a, b in t1.edges():
        for c, d in t2.edges():
            if (a == c and b == d) or (a == d and b == c):
                return True
    return False
