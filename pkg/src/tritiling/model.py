"""Finite tiling patches: triangle storage, analysis window, incidence indexes.

A patch is an immutable set of equilateral triangles with pairwise disjoint
interiors, clipped to a rectangular window.  Building a patch also builds

* a spatial grid over the window (cell size = largest side length),
* a canonical vertex registry (exact coordinates, or eps-snapped floats),
* per-vertex incidence lists (vertex role / edge-interior role),
* per-edge lists of vertices lying strictly inside the edge.

Triangles whose ``margin``-neighbourhood does not fit inside the window are
marked boundary; structural checks never draw conclusions from them.
Generators with better knowledge (e.g. the spiral, whose sides span many
orders of magnitude) may pass explicit interiority flags instead.

For the exact backend the hot paths (overlap scan, vertex-in-edge tests)
run on integer-scaled coordinates: every coordinate u + v*sqrt(3) is
multiplied by the common denominator of the patch, after which all sign
computations are pure big-integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    BackendMismatch,
    OverlapError,
    SqrtNotRepresentable,
    UnknownVertex,
    WindowError,
)
from .geometry import (
    ExactScalar,
    FloatScalar,
    Point,
    Scalar,
    TrianglePlacement,
    _cross_sign,
    _sub,
    common_backend,
    point_in_segment_interior,
)

ROLE_VERTEX = "vertex"
ROLE_EDGE_INTERIOR = "edge-interior"

INTERIOR = "interior"
BOUNDARY = "boundary"


class Incidence(NamedTuple):
    tri: int
    role: str
    slot: int  # vertex index for ROLE_VERTEX, edge index for ROLE_EDGE_INTERIOR


@dataclass(frozen=True)
class Window:
    """Axis-aligned analysis window."""

    xmin: Scalar
    xmax: Scalar
    ymin: Scalar
    ymax: Scalar

    def __post_init__(self):
        common_backend(self.xmin, self.xmax, self.ymin, self.ymax)
        if not ((self.xmax - self.xmin).sign() > 0 and
                (self.ymax - self.ymin).sign() > 0):
            raise ValueError("window must have positive width and height")

    @property
    def backend(self) -> str:
        return "exact" if self.xmin.is_exact else "float"

    def area(self) -> Scalar:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def shrink(self, margin: Scalar) -> "Window | None":
        """The window inset by ``margin`` on all sides, or None if empty."""
        xmin = self.xmin + margin
        xmax = self.xmax - margin
        ymin = self.ymin + margin
        ymax = self.ymax - margin
        if (xmax - xmin).sign() <= 0 or (ymax - ymin).sign() <= 0:
            return None
        return Window(xmin, xmax, ymin, ymax)

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (Point(self.xmin, self.ymin), Point(self.xmax, self.ymin),
                Point(self.xmax, self.ymax), Point(self.xmin, self.ymax))

    def contains_point(self, p: Point) -> bool:
        return ((p.x - self.xmin).sign() >= 0 and (self.xmax - p.x).sign() >= 0
                and (p.y - self.ymin).sign() >= 0
                and (self.ymax - p.y).sign() >= 0)

    def bounds_floats(self) -> tuple[float, float, float, float]:
        return (self.xmin.to_float(), self.xmax.to_float(),
                self.ymin.to_float(), self.ymax.to_float())

    def __eq__(self, other):
        if not isinstance(other, Window):
            return NotImplemented
        return (_scalar_identical(self.xmin, other.xmin)
                and _scalar_identical(self.xmax, other.xmax)
                and _scalar_identical(self.ymin, other.ymin)
                and _scalar_identical(self.ymax, other.ymax))


def _scalar_identical(a: Scalar, b: Scalar) -> bool:
    """Representation-level equality (no tolerance), used for round trips."""
    if a.is_exact != b.is_exact:
        return False
    if a.is_exact:
        return a.u == b.u and a.v == b.v
    return a.x == b.x


def triangle_window_overlap(t: TrianglePlacement, window: Window,
                            open_: bool = True) -> bool:
    """Does the triangle meet the window?

    ``open_`` True asks for a positive-area intersection of the interiors;
    False also accepts boundary contact.
    """
    # axis-aligned separation
    xs = [v.x for v in t.vertices]
    ys = [v.y for v in t.vertices]
    lim = 0 if open_ else -1
    if (max(xs) - window.xmin).sign() <= lim or (window.xmax - min(xs)).sign() <= lim:
        return False
    if (max(ys) - window.ymin).sign() <= lim or (window.ymax - min(ys)).sign() <= lim:
        return False
    # triangle edge axes against the window corners
    corners = window.corners()
    for a, b in t.edges():
        ex_, ey_ = _sub(b, a)
        if all(_cross_sign(ex_, ey_, *(_sub(c, a))) <= lim for c in corners):
            return False
    return True


# ---------------------------------------------------------------------------
# integer kernel for the exact backend
# ---------------------------------------------------------------------------

IntVertex = tuple[int, int, int, int]  # (xu, xv, yu, yv) scaled by the patch denominator


def _sign_uv(u: int, v: int) -> int:
    """Sign of (u + v*sqrt(3)) / D for integer u, v; D > 0 cancels."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if u > 0:
        if v > 0:
            return 1
        d = u * u - 3 * v * v
        return (d > 0) - (d < 0)
    if v < 0:
        return -1
    d = 3 * v * v - u * u
    return (d > 0) - (d < 0)


def _uv_mul(au: int, av: int, bu: int, bv: int) -> tuple[int, int]:
    return (au * bu + 3 * av * bv, au * bv + av * bu)


def _int_cross_sign(ax, ay, bx, by) -> int:
    """Sign of the cross product of two integer-scaled vectors."""
    pu, pv = _uv_mul(ax[0], ax[1], by[0], by[1])
    qu, qv = _uv_mul(ay[0], ay[1], bx[0], bx[1])
    return _sign_uv(pu - qu, pv - qv)


def _int_vec(a: IntVertex, b: IntVertex):
    """b - a split into x and y (u, v) pairs."""
    return ((b[0] - a[0], b[1] - a[1]), (b[2] - a[2], b[3] - a[3]))


def _int_interiors_disjoint(ta: Sequence[IntVertex], tb: Sequence[IntVertex]) -> bool:
    for first, second in ((ta, tb), (tb, ta)):
        for i in range(3):
            a = first[i]
            b = first[(i + 1) % 3]
            ex, ey = _int_vec(a, b)
            for p in second:
                fx, fy = _int_vec(a, p)
                if _int_cross_sign(ex, ey, fx, fy) > 0:
                    break
            else:
                return True
    return False


def _int_in_segment_interior(p: IntVertex, a: IntVertex, b: IntVertex) -> bool:
    ex, ey = _int_vec(a, b)
    fx, fy = _int_vec(a, p)
    if _int_cross_sign(ex, ey, fx, fy) != 0:
        return False
    du, dv = _uv_mul(ex[0], ex[1], fx[0], fx[1])
    d2u, d2v = _uv_mul(ey[0], ey[1], fy[0], fy[1])
    du, dv = du + d2u, dv + d2v
    if _sign_uv(du, dv) <= 0:
        return False
    lu, lv = _uv_mul(ex[0], ex[1], ex[0], ex[1])
    l2u, l2v = _uv_mul(ey[0], ey[1], ey[0], ey[1])
    lu, lv = lu + l2u, lv + l2v
    return _sign_uv(lu - du, lv - dv) > 0


def _exact_int_coords(triangles: Sequence[TrianglePlacement]):
    """Common denominator and integer-scaled vertex coordinates."""
    denom = 1
    for t in triangles:
        for v in t.vertices:
            for c in (v.x, v.y):
                denom = math.lcm(denom, c.u.denominator, c.v.denominator)
    coords: list[tuple[IntVertex, IntVertex, IntVertex]] = []
    for t in triangles:
        row = []
        for v in t.vertices:
            row.append((int(v.x.u * denom), int(v.x.v * denom),
                        int(v.y.u * denom), int(v.y.v * denom)))
        coords.append(tuple(row))
    return denom, coords


def _int_key_for_point(p: Point, denom: int) -> IntVertex | None:
    """Scaled key of an exact point, or None if off the denominator grid."""
    xu = p.x.u * denom
    xv = p.x.v * denom
    yu = p.y.u * denom
    yv = p.y.v * denom
    if xu.denominator != 1 or xv.denominator != 1 \
            or yu.denominator != 1 or yv.denominator != 1:
        return None
    return (int(xu), int(xv), int(yu), int(yv))


# ---------------------------------------------------------------------------
# float SAT prefilter (exact backend only)
# ---------------------------------------------------------------------------

_PREFILTER_TAU = 1e-7


def _float_sat_classify(ca, cb) -> str:
    """'disjoint', 'overlap' or 'ambiguous' from float shadows.

    ca/cb are 3 (x, y) float pairs, ccw.  Crosses are normalised by the
    squared scale of the vectors involved, so the verdicts are reliable
    whenever the normalised clearance exceeds _PREFILTER_TAU, far above
    double-precision noise.
    """
    certain_overlap = True
    for first, second in ((ca, cb), (cb, ca)):
        for i in range(3):
            ax, ay = first[i]
            bx, by = first[(i + 1) % 3]
            ex, ey = bx - ax, by - ay
            e2 = ex * ex + ey * ey
            worst = -math.inf
            for px, py in second:
                fx, fy = px - ax, py - ay
                ref = e2 + fx * fx + fy * fy
                c = (ex * fy - ey * fx) / ref if ref > 0 else 0.0
                if c > worst:
                    worst = c
            if worst <= -_PREFILTER_TAU:
                return "disjoint"
            if worst <= _PREFILTER_TAU:
                certain_overlap = False
    return "overlap" if certain_overlap else "ambiguous"


# ---------------------------------------------------------------------------
# the patch
# ---------------------------------------------------------------------------

class TilingPatch:
    """Immutable finite patch of a tiling.  Build via :func:`build_patch`."""

    def __init__(self, **kw):
        if not kw.pop("_from_builder", False):
            raise TypeError("use build_patch() to construct a TilingPatch")
        self.triangles: tuple[TrianglePlacement, ...] = kw["triangles"]
        self.window: Window = kw["window"]
        self.margin: Scalar = kw["margin"]
        self.backend: str = kw["backend"]
        self.eps: float = kw["eps"]
        self.interior_flags: tuple[bool, ...] = kw["interior_flags"]
        self._float_coords = kw["float_coords"]
        self._bboxes = kw["bboxes"]
        self._int_coords = kw["int_coords"]
        self._denom = kw["denom"]
        self._cell = kw["cell"]
        self._tri_grid = kw["tri_grid"]
        self._vertex_points: list[Point] = kw["vertex_points"]
        self._vertex_lookup = kw["vertex_lookup"]
        self._snap_cell = kw["snap_cell"]
        self._vertex_cells = kw["vertex_cells"]
        self._tri_vertex_ids = kw["tri_vertex_ids"]
        self._tri_key_map = kw["tri_key_map"]
        self._incident = kw["incident"]
        self._edge_div = kw["edge_div"]
        self._vertex_hosts = kw["vertex_hosts"]
        self._sq_sides = kw["sq_sides"]
        self._sides: list[Scalar | None] = [None] * len(self.triangles)

    # -- basic accessors --------------------------------------------------

    def __len__(self) -> int:
        return len(self.triangles)

    def is_interior(self, i: int) -> bool:
        return self.interior_flags[i]

    def interiority(self, i: int) -> str:
        return INTERIOR if self.interior_flags[i] else BOUNDARY

    def interior_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.interior_flags) if f]

    def sq_side(self, i: int) -> Scalar:
        return self._sq_sides[i]

    def side(self, i: int) -> Scalar:
        s = self._sides[i]
        if s is None:
            s = self._sq_sides[i].sqrt()
            self._sides[i] = s
        return s

    def edge_points(self, i: int, e: int) -> tuple[Point, Point]:
        vs = self.triangles[i].vertices
        return (vs[e], vs[(e + 1) % 3])

    # -- vertex registry ----------------------------------------------------

    def n_vertices(self) -> int:
        return len(self._vertex_points)

    def vertex_point(self, vid: int) -> Point:
        return self._vertex_points[vid]

    def vertex_id_of_point(self, p: Point) -> int | None:
        if self.backend == "exact":
            if not p.is_exact:
                raise BackendMismatch("exact patch queried with float point")
            key = _int_key_for_point(p, self._denom)
            if key is None:
                return None
            return self._vertex_lookup.get(key)
        if p.is_exact:
            raise BackendMismatch("float patch queried with exact point")
        return self._snap_find(p.x.x, p.y.x)

    def _snap_find(self, x: float, y: float) -> int | None:
        cs = self._snap_cell
        cx, cy = math.floor(x / cs), math.floor(y / cs)
        best = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for vid in self._vertex_lookup.get((cx + dx, cy + dy), ()):
                    px, py = self._vertex_points[vid].to_floats()
                    tol = self.eps * max(1.0, abs(x), abs(px))
                    if abs(px - x) > tol:
                        continue
                    tol = self.eps * max(1.0, abs(y), abs(py))
                    if abs(py - y) > tol:
                        continue
                    if best is None or vid < best:
                        best = vid
        return best

    def vertex_incidences(self, vid: int) -> tuple[Incidence, ...]:
        return self._incident[vid]

    def vertex_edge_hosts(self, vid: int) -> tuple[tuple[int, int], ...]:
        """Triangle edges that contain this vertex strictly inside."""
        return self._vertex_hosts[vid]

    def triangle_vertex_ids(self, i: int) -> tuple[int, int, int]:
        return self._tri_vertex_ids[i]

    def edge_interior_vertices(self, i: int, e: int) -> tuple[tuple[Scalar, int], ...]:
        """(parameter along the edge, vertex id), ordered along the edge."""
        return self._edge_div.get((i, e), ())

    def find_triangle(self, t: TrianglePlacement) -> int | None:
        """Index of a stored triangle equal to ``t``, or None."""
        ct = t.canonicalized()
        ids = []
        for v in ct.vertices:
            vid = self.vertex_id_of_point(v)
            if vid is None:
                return None
            ids.append(vid)
        return self._tri_key_map.get(tuple(ids))

    # -- misc ---------------------------------------------------------------

    def max_side_float(self) -> float:
        if not self.triangles:
            return 0.0
        return math.sqrt(max(s.to_float() for s in self._sq_sides))

    def recheck_overlaps(self, limit: int | None = 1) -> list[tuple[int, int]]:
        """Re-run the pairwise interior-overlap scan; [] when clean."""
        return _overlap_scan(self._float_coords, self._bboxes, self._int_coords,
                             self.backend, self.eps, self._tri_grid,
                             limit=limit)

    def __eq__(self, other):
        """Geometric identity: backend, eps, window and triangle list.

        Interiority and margin are derived metadata and deliberately not
        part of equality, so save/load round trips compare clean even when
        a generator attached custom interiority flags.
        """
        if not isinstance(other, TilingPatch):
            return NotImplemented
        if self.backend != other.backend or self.eps != other.eps:
            return False
        if self.window != other.window:
            return False
        if len(self.triangles) != len(other.triangles):
            return False
        for a, b in zip(self.triangles, other.triangles):
            for va, vb in zip(a.vertices, b.vertices):
                if not (_scalar_identical(va.x, vb.x)
                        and _scalar_identical(va.y, vb.y)):
                    return False
        return True

    def __repr__(self):
        return (f"TilingPatch({len(self.triangles)} triangles, "
                f"backend={self.backend!r})")


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------

def _grid_cells_for_bbox(bbox, cell: float):
    x0, y0, x1, y1 = bbox
    cx0 = math.floor(x0 / cell)
    cx1 = math.floor(x1 / cell)
    cy0 = math.floor(y0 / cell)
    cy1 = math.floor(y1 / cell)
    for cx in range(cx0, cx1 + 1):
        for cy in range(cy0, cy1 + 1):
            yield (cx, cy)


def _overlap_scan(float_coords, bboxes, int_coords, backend, eps, tri_grid,
                  limit: int | None):
    """All pairs with overlapping interiors, ascending; early exit at limit."""
    candidates = set()
    for ids in tri_grid.values():
        if len(ids) < 2:
            continue
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                i, j = ids[a], ids[b]
                if i > j:
                    i, j = j, i
                candidates.add((i, j))
    out = []
    for i, j in sorted(candidates):
        bi, bj = bboxes[i], bboxes[j]
        scale = max(1.0, abs(bi[0]), abs(bi[2]), abs(bj[0]), abs(bj[2]),
                    abs(bi[1]), abs(bi[3]), abs(bj[1]), abs(bj[3]))
        slack = 1e-12 * scale
        if (bi[2] < bj[0] - slack or bj[2] < bi[0] - slack or
                bi[3] < bj[1] - slack or bj[3] < bi[1] - slack):
            continue
        if backend == "exact":
            verdict = _float_sat_classify(float_coords[i], float_coords[j])
            if verdict == "disjoint":
                continue
            if verdict == "overlap":
                overlapping = True
            else:
                overlapping = not _int_interiors_disjoint(int_coords[i],
                                                          int_coords[j])
        else:
            overlapping = _float_interiors_intersect(float_coords[i],
                                                     float_coords[j], eps)
        if overlapping:
            out.append((i, j))
            if limit is not None and len(out) >= limit:
                return out
    return out


def _float_interiors_intersect(ca, cb, eps: float) -> bool:
    """Open-interior SAT on float shadows with eps-normalised signs."""
    for first, second in ((ca, cb), (cb, ca)):
        for i in range(3):
            ax, ay = first[i]
            bx, by = first[(i + 1) % 3]
            ex, ey = bx - ax, by - ay
            e2 = ex * ex + ey * ey
            separated = True
            for px, py in second:
                fx, fy = px - ax, py - ay
                ref = e2 + fx * fx + fy * fy
                c = ex * fy - ey * fx
                if c > eps * ref:
                    separated = False
                    break
            if separated:
                return False
    return True


def _default_margin(sq_sides, backend: str, eps: float) -> Scalar:
    """Twice the largest side length, as a patch-backend scalar."""
    if not sq_sides:
        return ExactScalar(0) if backend == "exact" else FloatScalar(0.0, eps)
    if backend == "float":
        m = max(s.x for s in sq_sides)
        return FloatScalar(2.0 * math.sqrt(m), eps)
    best = sq_sides[0]
    for s in sq_sides[1:]:
        if (s - best).sign() > 0:
            best = s
    try:
        root = best.sqrt()
    except SqrtNotRepresentable:
        # round the float value up to a nearby rational; margin is a policy
        # knob, so a slightly larger value is harmless
        approx_root = math.sqrt(best.to_float())
        root = ExactScalar(Fraction(math.ceil(approx_root * (1 << 20)), 1 << 20))
    return root * 2


def build_patch(triangles: Iterable[TrianglePlacement], window: Window,
                margin: Scalar | None = None,
                interior_flags: Sequence[bool] | None = None) -> TilingPatch:
    """Assemble and index a patch; rejects interior overlaps.

    ``margin`` defaults to twice the largest side length.  When
    ``interior_flags`` is given (aligned with the input order) it overrides
    the margin-based interiority rule.
    """
    tris_in = [t.canonicalized() for t in triangles]
    backend = None
    eps = 0.0
    for t in tris_in:
        b = t.backend
        if backend is None:
            backend = b
        elif backend != b:
            raise BackendMismatch("triangles mix backends")
        if b == "float":
            eps = max(eps, t.v0.x.eps)
    if backend is None:
        backend = window.backend
    if window.backend != backend:
        raise BackendMismatch("window backend differs from triangle backend")
    if backend == "float":
        eps = max(eps, window.xmin.eps)
        if eps == 0.0:
            eps = 1e-9

    order = sorted(range(len(tris_in)), key=lambda i: tris_in[i].sort_key())
    tris = [tris_in[i] for i in order]
    if interior_flags is not None:
        if len(interior_flags) != len(tris_in):
            raise ValueError("interior_flags length mismatch")
        flags_sorted = [bool(interior_flags[i]) for i in order]
    else:
        flags_sorted = None

    for idx, t in enumerate(tris):
        if not triangle_window_overlap(t, window, open_=False):
            raise WindowError(f"triangle {idx} does not intersect the window")

    sq_sides = [t.sq_side() for t in tris]
    if margin is None:
        margin = _default_margin(sq_sides, backend, eps)
    elif (backend == "exact") != margin.is_exact:
        raise BackendMismatch("margin backend differs from patch backend")

    float_coords = [tuple(v.to_floats() for v in t.vertices) for t in tris]
    bboxes = []
    for c in float_coords:
        xs = [p[0] for p in c]
        ys = [p[1] for p in c]
        bboxes.append((min(xs), min(ys), max(xs), max(ys)))

    if backend == "exact":
        denom, int_coords = _exact_int_coords(tris)
    else:
        denom, int_coords = 1, None

    cell = max((math.sqrt(s.to_float()) for s in sq_sides), default=1.0)
    if cell <= 0:
        cell = 1.0
    tri_grid: dict[tuple[int, int], list[int]] = {}
    for i, bbox in enumerate(bboxes):
        for c in _grid_cells_for_bbox((bbox[0], bbox[1], bbox[2], bbox[3]), cell):
            tri_grid.setdefault(c, []).append(i)

    overlaps = _overlap_scan(float_coords, bboxes, int_coords, backend, eps,
                             tri_grid, limit=1)
    if overlaps:
        raise OverlapError(*overlaps[0])

    # vertex registry
    vertex_points: list[Point] = []
    vertex_int_keys: list[IntVertex] = []
    tri_vertex_ids: list[tuple[int, int, int]] = []
    snap_cell = 1000.0 * eps if backend == "float" else 0.0
    vertex_lookup: dict = {}
    if backend == "exact":
        for i, t in enumerate(tris):
            ids = []
            for k, v in enumerate(t.vertices):
                key = int_coords[i][k]
                vid = vertex_lookup.get(key)
                if vid is None:
                    vid = len(vertex_points)
                    vertex_lookup[key] = vid
                    vertex_points.append(v)
                    vertex_int_keys.append(key)
                ids.append(vid)
            tri_vertex_ids.append(tuple(ids))
    else:
        def snap_insert(v: Point) -> int:
            x, y = v.to_floats()
            cx, cy = math.floor(x / snap_cell), math.floor(y / snap_cell)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for vid in vertex_lookup.get((cx + dx, cy + dy), ()):
                        px, py = vertex_points[vid].to_floats()
                        if abs(px - x) <= eps * max(1.0, abs(px), abs(x)) and \
                           abs(py - y) <= eps * max(1.0, abs(py), abs(y)):
                            return vid
            vid = len(vertex_points)
            vertex_lookup.setdefault((cx, cy), []).append(vid)
            vertex_points.append(v)
            return vid

        for t in tris:
            tri_vertex_ids.append(tuple(snap_insert(v) for v in t.vertices))

    tri_key_map = {ids: i for i, ids in enumerate(tri_vertex_ids)}

    # vertex positions bucketed at triangle-grid granularity
    vertex_cells: dict[tuple[int, int], list[int]] = {}
    for vid, p in enumerate(vertex_points):
        x, y = p.to_floats()
        c = (math.floor(x / cell), math.floor(y / cell))
        vertex_cells.setdefault(c, []).append(vid)

    # incidences: vertex roles first
    incident: list[list[Incidence]] = [[] for _ in vertex_points]
    for i, ids in enumerate(tri_vertex_ids):
        for slot, vid in enumerate(ids):
            incident[vid].append(Incidence(i, ROLE_VERTEX, slot))

    # vertices strictly inside edges
    edge_div: dict[tuple[int, int], tuple] = {}
    vertex_hosts: list[list[tuple[int, int]]] = [[] for _ in vertex_points]
    for i, t in enumerate(tris):
        own = set(tri_vertex_ids[i])
        for e in range(3):
            a, b = t.vertices[e], t.vertices[(e + 1) % 3]
            (ax, ay), (bx, by) = a.to_floats(), b.to_floats()
            ebox = (min(ax, bx) - cell * 0.5, min(ay, by) - cell * 0.5,
                    max(ax, bx) + cell * 0.5, max(ay, by) + cell * 0.5)
            cand: set[int] = set()
            for c in _grid_cells_for_bbox(ebox, cell):
                cand.update(vertex_cells.get(c, ()))
            found = []
            for vid in cand:
                if vid in own:
                    continue
                p = vertex_points[vid]
                if backend == "exact":
                    inside = _int_in_segment_interior(
                        vertex_int_keys[vid],
                        int_coords[i][e], int_coords[i][(e + 1) % 3])
                else:
                    inside = point_in_segment_interior(p, (a, b))
                if inside:
                    ex_, ey_ = _sub(b, a)
                    fx_, fy_ = _sub(p, a)
                    t_par = (ex_ * fx_ + ey_ * fy_) / (ex_ * ex_ + ey_ * ey_)
                    found.append((t_par, vid))
            if found:
                found.sort(key=lambda pv: (pv[0].to_float(), pv[1]))
                edge_div[(i, e)] = tuple(found)
                for _, vid in found:
                    vertex_hosts[vid].append((i, e))
                    incident[vid].append(Incidence(i, ROLE_EDGE_INTERIOR, e))

    incident_frozen = [tuple(sorted(lst)) for lst in incident]
    hosts_frozen = [tuple(sorted(lst)) for lst in vertex_hosts]

    # interiority
    if flags_sorted is None:
        shrunk = window.shrink(margin)
        flags_sorted = []
        for t in tris:
            if shrunk is None:
                flags_sorted.append(False)
                continue
            ok = all(shrunk.contains_point(v) for v in t.vertices)
            flags_sorted.append(ok)

    return TilingPatch(
        _from_builder=True,
        triangles=tuple(tris),
        window=window,
        margin=margin,
        backend=backend,
        eps=eps,
        interior_flags=tuple(flags_sorted),
        float_coords=float_coords,
        bboxes=bboxes,
        int_coords=int_coords,
        denom=denom,
        cell=cell,
        tri_grid=tri_grid,
        vertex_points=vertex_points,
        vertex_lookup=vertex_lookup,
        snap_cell=snap_cell,
        vertex_cells=vertex_cells,
        tri_vertex_ids=tri_vertex_ids,
        tri_key_map=tri_key_map,
        incident=incident_frozen,
        edge_div=edge_div,
        vertex_hosts=hosts_frozen,
        sq_sides=sq_sides,
    )


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------

def incident_triangles(patch: TilingPatch, p: Point):
    """All (triangle, role) pairs incident to the vertex at ``p``.

    Role is ``"vertex"`` for triangles having p as a corner and
    ``"edge-interior"`` for the triangle(s) having p strictly inside an
    edge.  Raises UnknownVertex when p is not a vertex of the patch.
    """
    vid = patch.vertex_id_of_point(p)
    if vid is None:
        raise UnknownVertex(f"{p!r} is not a vertex of the patch")
    return [(patch.triangles[inc.tri], inc.role)
            for inc in patch.vertex_incidences(vid)]


def _poly_area(poly: Sequence[Point]) -> Scalar:
    """Shoelace area of a ccw polygon (Scalar, same backend)."""
    if len(poly) < 3:
        raise ValueError("polygon needs at least 3 vertices")
    acc = None
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        term = a.x * b.y - b.x * a.y
        acc = term if acc is None else acc + term
    return acc / 2


def _clip_axis(poly: list[Point], axis: str, bound: Scalar, keep_ge: bool) -> list[Point]:
    if not poly:
        return poly
    out: list[Point] = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        c = (cur.x if axis == "x" else cur.y) - bound
        d = (nxt.x if axis == "x" else nxt.y) - bound
        c_in = c.sign() >= 0 if keep_ge else c.sign() <= 0
        d_in = d.sign() >= 0 if keep_ge else d.sign() <= 0
        if c_in:
            out.append(cur)
        if c_in != d_in:
            t = c / (c - d)
            out.append(Point(cur.x + t * (nxt.x - cur.x),
                             cur.y + t * (nxt.y - cur.y)))
    return out


def _clip_to_rect(poly: list[Point], rect: Window) -> list[Point]:
    poly = _clip_axis(poly, "x", rect.xmin, keep_ge=True)
    poly = _clip_axis(poly, "x", rect.xmax, keep_ge=False)
    poly = _clip_axis(poly, "y", rect.ymin, keep_ge=True)
    poly = _clip_axis(poly, "y", rect.ymax, keep_ge=False)
    return poly


def clipped_area_in(patch: TilingPatch, rect: Window) -> Scalar:
    """Total area of triangle-and-rectangle intersections over the patch."""
    zero = ExactScalar(0) if patch.backend == "exact" else FloatScalar(0.0, patch.eps)
    total = zero
    rx0, rx1, ry0, ry1 = (rect.xmin, rect.xmax, rect.ymin, rect.ymax)
    for i, t in enumerate(patch.triangles):
        bx0, by0, bx1, by1 = patch._bboxes[i]
        fx0, fx1, fy0, fy1 = (rx0.to_float(), rx1.to_float(),
                              ry0.to_float(), ry1.to_float())
        # clearly inside: shoelace directly
        if bx0 >= fx0 and bx1 <= fx1 and by0 >= fy0 and by1 <= fy1:
            inside = all(rect.contains_point(v) for v in t.vertices)
            if inside:
                total = total + _poly_area(list(t.vertices))
                continue
        poly = _clip_to_rect(list(t.vertices), rect)
        if len(poly) >= 3:
            a = _poly_area(poly)
            if a.sign() > 0:
                total = total + a
    return total


def clipped_area(patch: TilingPatch) -> Scalar:
    """Measure of the union of the triangles inside the patch window."""
    return clipped_area_in(patch, patch.window)
