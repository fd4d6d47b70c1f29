"""Constructions: the periodic three-size tiling, the similarity spiral,
and the edge-to-edge lattice used as a negative control.

The periodic construction places, in every cell of a rank-2 lattice, one
large upward triangle of side a = b + c and two small downward triangles
of sides b and c.  Every edge of a large triangle carries exactly one
subdivision vertex, at distance b from the edge's start in cyclic order
(the left-b-first chirality; the mirrored construction puts c first).
The cell geometry is not taken on faith anywhere: the test suite
re-derives its correctness by brute force (disjointness of a 3x3 block of
cells and an exact area balance) before anything else relies on it.

The spiral construction fixes a similarity phi that rotates by pi/3
about a point P while contracting by the real root of x^3 + x^2 - 1, and
tiles the punctured plane with the orbit of one seed triangle under phi.
Sides shrink geometrically, so all placements use the float backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BackendError,
    DegenerateSpec,
    NonPositiveSide,
    RangeError,
)
from .geometry import (
    DEFAULT_EPS,
    ExactScalar,
    FloatScalar,
    Point,
    Scalar,
    TrianglePlacement,
)
from .model import TilingPatch, Window, build_patch, triangle_window_overlap

LEFT_B_FIRST = "left-b-first"
RIGHT_B_FIRST = "right-b-first"


def real_root_unit_cubic() -> float:
    """The unique real root of x^3 + x^2 - 1, by bisection on [0.7, 0.8].

    Runs until the interval cannot be split further, i.e. to full double
    precision.
    """
    lo, hi = 0.7, 0.8
    while True:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            return mid
        if mid * mid * mid + mid * mid - 1.0 <= 0.0:
            lo = mid
        else:
            hi = mid


#: contraction factor of the spiral similarity
ALPHA = real_root_unit_cubic()


def _as_fraction(x) -> Fraction:
    if isinstance(x, FloatScalar):
        raise BackendError("this construction requires exact rational sides")
    if isinstance(x, ExactScalar):
        if x.v != 0:
            raise BackendError("side lengths must be rational")
        return x.u
    return Fraction(x)


@dataclass(frozen=True)
class PeriodicSpec:
    """Small side lengths b and c; the large side is a = b + c."""

    b: Fraction
    c: Fraction
    chirality: str = LEFT_B_FIRST

    def __post_init__(self):
        object.__setattr__(self, "b", _as_fraction(self.b))
        object.__setattr__(self, "c", _as_fraction(self.c))
        if self.b <= 0 or self.c <= 0:
            raise NonPositiveSide(f"b={self.b}, c={self.c}")
        if self.chirality not in (LEFT_B_FIRST, RIGHT_B_FIRST):
            raise ValueError(f"unknown chirality {self.chirality!r}")

    @property
    def a(self) -> Fraction:
        return self.b + self.c


def _exact_pt(x: Fraction, y_rat: Fraction, y_root: Fraction) -> Point:
    """Point (x, y_rat + y_root*sqrt(3)) in the exact backend."""
    return Point(ExactScalar(x), ExactScalar(y_rat, y_root))


def periodic_cell(spec: PeriodicSpec):
    """Base cell triangles and the lattice vectors (t1, t2).

    Vectors are (Scalar, Scalar) pairs in the exact backend.
    """
    b, c, a = spec.b, spec.c, spec.a
    large = TrianglePlacement(
        _exact_pt(Fraction(0), Fraction(0), Fraction(0)),
        _exact_pt(a, Fraction(0), Fraction(0)),
        _exact_pt(a / 2, Fraction(0), a / 2))
    small_b = TrianglePlacement(
        _exact_pt(Fraction(0), Fraction(0), Fraction(0)),
        _exact_pt(b / 2, Fraction(0), -b / 2),
        _exact_pt(b, Fraction(0), Fraction(0)))
    small_c = TrianglePlacement(
        _exact_pt(b, Fraction(0), Fraction(0)),
        _exact_pt((a + b) / 2, Fraction(0), -c / 2),
        _exact_pt(a, Fraction(0), Fraction(0)))
    t1 = (ExactScalar(b / 2 - a), ExactScalar(0, -b / 2))
    t2 = (ExactScalar((a + b) / 2), ExactScalar(0, -c / 2))
    cell = [large, small_b, small_c]
    if spec.chirality == RIGHT_B_FIRST:
        cell = [_mirror_x(t) for t in cell]
        t1 = (-t1[0], t1[1])
        t2 = (-t2[0], t2[1])
    return cell, t1, t2


def _mirror_x(t: TrianglePlacement) -> TrianglePlacement:
    def m(p: Point) -> Point:
        return Point(-p.x, p.y)
    # the constructor restores ccw order
    return TrianglePlacement(m(t.v0), m(t.v1), m(t.v2))


def lattice_index_ranges(t1, t2, window: Window, pad: float):
    """Integer (m, n) bounds whose cells can reach the padded window."""
    a11, a21 = t1[0].to_float(), t1[1].to_float()
    a12, a22 = t2[0].to_float(), t2[1].to_float()
    det = a11 * a22 - a12 * a21
    x0, x1, y0, y1 = window.bounds_floats()
    ms, ns = [], []
    for x in (x0 - pad, x1 + pad):
        for y in (y0 - pad, y1 + pad):
            m = (a22 * x - a12 * y) / det
            n = (-a21 * x + a11 * y) / det
            ms.append(m)
            ns.append(n)
    return (math.floor(min(ms)) - 1, math.ceil(max(ms)) + 1,
            math.floor(min(ns)) - 1, math.ceil(max(ns)) + 1)


def periodic_three_size(spec: PeriodicSpec, window: Window,
                        margin: Scalar | None = None) -> TilingPatch:
    """Patch of the periodic three-size tiling covering the window."""
    if window.backend != "exact":
        raise BackendError("the periodic construction is exact; "
                           "use an exact window")
    cell, t1, t2 = periodic_cell(spec)
    pad = 2.0 * float(spec.a)
    m0, m1, n0, n1 = lattice_index_ranges(t1, t2, window, pad)
    tris = []
    for m in range(m0, m1 + 1):
        dx1 = t1[0] * m
        dy1 = t1[1] * m
        for n in range(n0, n1 + 1):
            dx = dx1 + t2[0] * n
            dy = dy1 + t2[1] * n
            for base in cell:
                t = base.translate(dx, dy)
                if triangle_window_overlap(t, window, open_=True):
                    tris.append(t)
    return build_patch(tris, window, margin=margin)


def periodic_lattice_vectors(spec: PeriodicSpec):
    """The lattice basis (t1, t2) of the construction, as scalar pairs."""
    _, t1, t2 = periodic_cell(spec)
    return t1, t2


# ---------------------------------------------------------------------------
# spiral
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpiralSpec:
    """Seed data for the similarity spiral.

    ``p`` is the fixed point of the similarity, ``a`` the seed vertex;
    triangles with indices i_min..i_max are generated.  Index i has side
    |a - phi(a)| * alpha**i, so deep positive indices shrink towards p.
    """

    p: tuple[float, float]
    a: tuple[float, float]
    i_min: int = -40
    i_max: int = 40
    eps: float = DEFAULT_EPS
    alpha: float = field(default=ALPHA)

    def __post_init__(self):
        if self.i_min > self.i_max:
            raise ValueError("i_min exceeds i_max")
        scale = max(1.0, abs(complex(*self.p)), abs(complex(*self.a)))
        if abs(complex(*self.p) - complex(*self.a)) <= self.eps * scale:
            raise DegenerateSpec("the fixed point and the seed vertex coincide")


def spiral_placements(spec: SpiralSpec) -> list[TrianglePlacement]:
    """Triangle placements for indices i_min..i_max, in index order."""
    alpha = spec.alpha
    p = complex(*spec.p)
    a = complex(*spec.a)
    w = alpha * complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    b = p + w * (a - p)
    ell = abs(b - a)

    side_min = ell * alpha ** spec.i_max
    side_max = ell * alpha ** spec.i_min
    if side_min <= 1000.0 * spec.eps * max(1.0, abs(p)):
        raise RangeError(
            f"smallest side {side_min:.3g} under-resolves the comparison "
            f"tolerance near the fixed point")
    if side_max > 1e15:
        raise RangeError(f"largest side {side_max:.3g} overflows float range")

    # seed apex on the same side of line a-b as the fixed point
    mid = (a + b) / 2
    h = 1j * (math.sqrt(3) / 2) * (b - a)
    orient_p = ((b - a).conjugate() * (p - a)).imag
    apex = mid + h if ((b - a).conjugate() * (mid + h - a)).imag * orient_p > 0 \
        else mid - h
    seed = (a, b, apex)

    by_index: dict[int, tuple[complex, complex, complex]] = {0: seed}
    cur = seed
    for i in range(1, spec.i_max + 1):
        cur = tuple(p + w * (z - p) for z in cur)
        by_index[i] = cur
    w_inv = 1.0 / w
    cur = seed
    for i in range(-1, spec.i_min - 1, -1):
        cur = tuple(p + w_inv * (z - p) for z in cur)
        by_index[i] = cur

    out = []
    for i in range(spec.i_min, spec.i_max + 1):
        z0, z1, z2 = by_index[i]
        out.append(TrianglePlacement(
            Point(FloatScalar(z0.real, spec.eps), FloatScalar(z0.imag, spec.eps)),
            Point(FloatScalar(z1.real, spec.eps), FloatScalar(z1.imag, spec.eps)),
            Point(FloatScalar(z2.real, spec.eps), FloatScalar(z2.imag, spec.eps))))
    return out


def klaassen_spiral(spec: SpiralSpec) -> TilingPatch:
    """Patch containing the spiral triangles for the requested index range.

    The window is the padded bounding box of the placements.  Interiority
    is index-based: a triangle is marked interior when all triangles it
    structurally depends on (six adjacency steps each way) are inside the
    range.  A distance margin cannot express that here because the sides
    span many orders of magnitude, so the patch margin is zero.
    """
    placements = spiral_placements(spec)
    xs = [v.x.x for t in placements for v in t.vertices]
    ys = [v.y.x for t in placements for v in t.vertices]
    pad = 0.02 * max(max(xs) - min(xs), max(ys) - min(ys))
    window = Window(FloatScalar(min(xs) - pad, spec.eps),
                    FloatScalar(max(xs) + pad, spec.eps),
                    FloatScalar(min(ys) - pad, spec.eps),
                    FloatScalar(max(ys) + pad, spec.eps))
    flags = [spec.i_min + 6 <= i <= spec.i_max - 6
             for i in range(spec.i_min, spec.i_max + 1)]
    return build_patch(placements, window,
                       margin=FloatScalar(0.0, spec.eps),
                       interior_flags=flags)


# ---------------------------------------------------------------------------
# edge-to-edge lattice (negative control)
# ---------------------------------------------------------------------------

def uniform_lattice(s, window: Window, margin: Scalar | None = None) -> TilingPatch:
    """The standard edge-to-edge triangular lattice of side s.

    Violates the no-shared-side requirement by design; used to exercise
    the verifier's failure paths.
    """
    if isinstance(s, FloatScalar):
        if window.backend != "float":
            raise BackendError("float side with non-float window")
        eps = s.eps
        half_h = FloatScalar(math.sqrt(3) / 2, eps)
        side = s
    else:
        frac = _as_fraction(s)
        if frac <= 0:
            raise NonPositiveSide(str(frac))
        if window.backend != "exact":
            raise BackendError("rational side with non-exact window")
        side = ExactScalar(frac)
        half_h = ExactScalar(0, Fraction(1, 2))
    if side.to_float() <= 0:
        raise NonPositiveSide("side must be positive")

    h = side * half_h
    sf = side.to_float()
    hf = h.to_float()
    x0, x1, y0, y1 = window.bounds_floats()
    j0 = math.floor((y0 - 2 * hf) / hf) - 1
    j1 = math.ceil((y1 + 2 * hf) / hf) + 1
    tris = []
    for j in range(j0, j1 + 1):
        y = h * j
        ynext = h * (j + 1)
        shift = j * sf / 2
        i0 = math.floor((x0 - 2 * sf - shift) / sf) - 1
        i1 = math.ceil((x1 + 2 * sf - shift) / sf) + 1
        for i in range(i0, i1 + 1):
            x = side * i + side * Fraction(j, 2) if side.is_exact \
                else side * i + side * (j / 2)
            up = TrianglePlacement(Point(x, y),
                                   Point(x + side, y),
                                   Point(x + side / 2, ynext))
            down = TrianglePlacement(Point(x + side, y),
                                     Point(x + side + side / 2, ynext),
                                     Point(x + side / 2, ynext))
            for t in (up, down):
                if triangle_window_overlap(t, window, open_=True):
                    tris.append(t)
    return build_patch(tris, window, margin=margin)
