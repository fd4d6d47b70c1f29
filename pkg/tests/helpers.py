"""Independent oracles used by the test suite.

Everything here is deliberately written from first principles rather than
through the library's own geometry paths: polygon clipping against an
arbitrary convex region, shoelace areas, a root solver, and Monte-Carlo
point membership.  Tests freeze expected values computed by these
oracles and compare the library against them.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from tritiling import (
    ExactScalar,
    PeriodicSpec,
    TrianglePlacement,
    exact,
    periodic_cell,
)

# ---------------------------------------------------------------------------
# exact convex clipping oracle (scalar pairs, no library predicates)
# ---------------------------------------------------------------------------

Vec2 = tuple[ExactScalar, ExactScalar]


def _cross(o: Vec2, a: Vec2, b: Vec2) -> ExactScalar:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def clip_convex(subject: list[Vec2], clip_ccw: list[Vec2]) -> list[Vec2]:
    """Sutherland-Hodgman clip of a convex subject by a ccw convex region."""
    poly = list(subject)
    n = len(clip_ccw)
    for k in range(n):
        if not poly:
            return []
        a, b = clip_ccw[k], clip_ccw[(k + 1) % n]
        out: list[Vec2] = []
        m = len(poly)
        for i in range(m):
            cur, nxt = poly[i], poly[(i + 1) % m]
            c_in = _cross(a, b, cur).sign() >= 0
            n_in = _cross(a, b, nxt).sign() >= 0
            if c_in:
                out.append(cur)
            if c_in != n_in:
                # intersection of cur-nxt with line a-b
                d1 = _cross(a, b, cur)
                d2 = _cross(a, b, nxt)
                t = d1 / (d1 - d2)
                out.append((cur[0] + t * (nxt[0] - cur[0]),
                            cur[1] + t * (nxt[1] - cur[1])))
        poly = out
    return poly


def shoelace(poly: list[Vec2]) -> ExactScalar:
    if len(poly) < 3:
        return exact(0)
    acc = exact(0)
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        acc = acc + (a[0] * b[1] - b[0] * a[1])
    return acc / 2


def tri_vecs(t: TrianglePlacement) -> list[Vec2]:
    return [(v.x, v.y) for v in t.vertices]


# ---------------------------------------------------------------------------
# brute-force validation of the periodic cell construction
# ---------------------------------------------------------------------------

def check_periodic_cell_oracle(spec: PeriodicSpec) -> None:
    """Brute-force a block of cells: no pair of triangles may share
    interior area, and the triangle area inside the central cell must
    equal the lattice determinant exactly.

    The block is 5x5: a triangle reaches at most a from its cell anchor
    while the shortest lattice vector has length at least (sqrt(3)/2) a,
    so cells three or more steps away cannot touch the central cell.  A
    3x3 block is genuinely insufficient, e.g. (b, c) = (1, 2) leaves a
    central defect of sqrt(3)/3.
    """
    cell, t1, t2 = periodic_cell(spec)
    tris: list[TrianglePlacement] = []
    for m in range(5):
        for n in range(5):
            dx = t1[0] * m + t2[0] * n
            dy = t1[1] * m + t2[1] * n
            for base in cell:
                tris.append(base.translate(dx, dy))

    # (i) zero interior overlap, measured as area of pairwise intersections;
    # pairs whose float bounding boxes are clearly apart cannot overlap
    vecs = [tri_vecs(t) for t in tris]
    boxes = []
    slack = 0.0
    for pv in vecs:
        xs = [c[0].to_float() for c in pv]
        ys = [c[1].to_float() for c in pv]
        boxes.append((min(xs), min(ys), max(xs), max(ys)))
        slack = max(slack, 1e-9 * max(map(abs, xs + ys), default=1.0))
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            bi, bj = boxes[i], boxes[j]
            if (bi[2] < bj[0] - slack or bj[2] < bi[0] - slack or
                    bi[3] < bj[1] - slack or bj[3] < bi[1] - slack):
                continue
            inter = clip_convex(vecs[i], vecs[j])
            area = shoelace(inter)
            assert area.sign() == 0, \
                f"triangles {i} and {j} overlap with area {area!r}"

    # (ii) the central cell of the block is exactly covered
    origin = ((t1[0] + t2[0]) * 2, (t1[1] + t2[1]) * 2)
    c10 = (origin[0] + t1[0], origin[1] + t1[1])
    c11 = (origin[0] + t1[0] + t2[0], origin[1] + t1[1] + t2[1])
    c01 = (origin[0] + t2[0], origin[1] + t2[1])
    det = t1[0] * t2[1] - t1[1] * t2[0]
    inner = [origin, c10, c11, c01] if det.sign() > 0 else \
            [origin, c01, c11, c10]
    covered = exact(0)
    for t in tris:
        covered = covered + shoelace(clip_convex(tri_vecs(t), inner))
    assert (covered - abs(det)).sign() == 0, \
        f"central cell coverage {covered!r} != determinant {abs(det)!r}"

    # the determinant identities for the cell area
    b, c, a = spec.b, spec.c, spec.a
    by_small = ExactScalar(0, Fraction(b * b + b * c + c * c, 2))
    by_all = ExactScalar(0, Fraction(a * a + b * b + c * c, 4))
    assert abs(det) == by_small == by_all


# ---------------------------------------------------------------------------
# scalar root oracle
# ---------------------------------------------------------------------------

def bisect_root(f, lo: float, hi: float) -> float:
    """Bisection to full double precision; f(lo) <= 0 < f(hi)."""
    while True:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            return mid
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid


# ---------------------------------------------------------------------------
# Monte-Carlo membership oracle (floats, no library predicates)
# ---------------------------------------------------------------------------

def random_equilateral(rng: random.Random, eps: float = 1e-9,
                       center_range: float = 4.0) -> TrianglePlacement:
    from tritiling import fl_point
    cx = rng.uniform(-center_range, center_range)
    cy = rng.uniform(-center_range, center_range)
    r = rng.uniform(0.3, 1.5)
    th = rng.uniform(0, 2 * math.pi)
    pts = []
    for k in range(3):
        ang = th + 2 * math.pi * k / 3
        pts.append(fl_point(cx + r * math.cos(ang), cy + r * math.sin(ang), eps))
    return TrianglePlacement(*pts)


def _strictly_inside(px: float, py: float, coords, tol: float) -> bool:
    for i in range(3):
        ax, ay = coords[i]
        bx, by = coords[(i + 1) % 3]
        if (bx - ax) * (py - ay) - (by - ay) * (px - ax) <= tol:
            return False
    return True


def mc_interior_overlap_witness(t1: TrianglePlacement, t2: TrianglePlacement,
                                rng: random.Random, samples: int = 512) -> bool:
    """True when sampling finds a point interior to both triangles."""
    c1 = [v.to_floats() for v in t1.vertices]
    c2 = [v.to_floats() for v in t2.vertices]
    scale = max(abs(c) for pt in c1 + c2 for c in pt) + 1.0
    tol = 1e-12 * scale * scale
    for src, other in ((c1, c2), (c2, c1)):
        (ax, ay), (bx, by), (cx, cy) = src
        for _ in range(samples):
            r1, r2 = rng.random(), rng.random()
            s1 = math.sqrt(r1)
            u, v, w = 1 - s1, s1 * (1 - r2), s1 * r2
            px = u * ax + v * bx + w * cx
            py = u * ay + v * by + w * cy
            if _strictly_inside(px, py, src, tol) and \
               _strictly_inside(px, py, other, tol):
                return True
    return False
