"""Combinatorial structure of a patch: edge statuses, triangle classes,
and the numbered structural invariants (lemma5, lemma7 .. lemma10) that
hold in every plane tiling by equilateral triangles whose sides are
bounded below and in which no two triangles share a side.

Terminology used throughout:

* an edge is *subdivided* when some other triangle has a vertex strictly
  inside it, and *uncut* otherwise;
* edge AB *continues at A* when A lies strictly inside an edge e of
  another triangle and e overlaps AB in a positive-length segment;
* a triangle is *small* (all edges uncut), *large* (all edges
  subdivided), or *improper* (it has an uncut edge, and also an edge
  continuing at neither endpoint).

Only interior-marked triangles are classified; boundary triangles sit too
close to the window edge for their surroundings to be trusted, and they
never produce violations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import IndeterminateForBoundary, PreconditionViolated, StructureError
from .geometry import Point, Scalar, TrianglePlacement, collinear_overlap
from .model import ROLE_EDGE_INTERIOR, TilingPatch


class TriangleClass(enum.Enum):
    SMALL = "small"
    LARGE = "large"
    IMPROPER = "improper"
    OTHER = "other"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class EdgeStatus:
    """Uncut, or subdivided carrying its interior vertices in edge order."""

    interior_vertices: tuple[Point, ...]

    @property
    def is_subdivided(self) -> bool:
        return bool(self.interior_vertices)

    @property
    def is_uncut(self) -> bool:
        return not self.interior_vertices

    def __repr__(self):
        if self.is_uncut:
            return "EdgeStatus(uncut)"
        return f"EdgeStatus(subdivided, {len(self.interior_vertices)} vertices)"


@dataclass(frozen=True)
class Violation:
    triangle: int
    rule: str
    detail: str
    edge: int | None = None

    def __str__(self):
        where = f" edge {self.edge}" if self.edge is not None else ""
        return f"[{self.rule}] triangle {self.triangle}{where}: {self.detail}"


def _require_interior(patch: TilingPatch, t: int):
    if not patch.is_interior(t):
        raise IndeterminateForBoundary(
            f"triangle {t} is boundary-marked; its structure is indeterminate")


def edge_status(patch: TilingPatch, t: int, edge_index: int) -> EdgeStatus:
    """Status of one edge of an interior triangle."""
    _require_interior(patch, t)
    return _raw_edge_status(patch, t, edge_index)


def _raw_edge_status(patch: TilingPatch, t: int, edge_index: int) -> EdgeStatus:
    entries = patch.edge_interior_vertices(t, edge_index)
    return EdgeStatus(tuple(patch.vertex_point(vid) for _, vid in entries))


def continues_at(patch: TilingPatch, t: int, edge_index: int, endpoint: int) -> bool:
    """Does this edge continue at the chosen endpoint (0 = start, 1 = end)?"""
    _require_interior(patch, t)
    return _raw_continues_at(patch, t, edge_index, endpoint)


def _raw_continues_at(patch: TilingPatch, t: int, edge_index: int,
                      endpoint: int) -> bool:
    if endpoint not in (0, 1):
        raise ValueError("endpoint must be 0 or 1")
    a, b = patch.edge_points(t, edge_index)
    vids = patch.triangle_vertex_ids(t)
    vid = vids[edge_index] if endpoint == 0 else vids[(edge_index + 1) % 3]
    for host_tri, host_edge in patch.vertex_edge_hosts(vid):
        host_seg = patch.edge_points(host_tri, host_edge)
        if collinear_overlap(host_seg, (a, b)) is not None:
            return True
    return False


def _edge_flags(patch: TilingPatch, t: int):
    """(is_subdivided, continues_at_0, continues_at_1) per edge."""
    out = []
    for e in range(3):
        sub = bool(patch.edge_interior_vertices(t, e))
        c0 = _raw_continues_at(patch, t, e, 0)
        c1 = _raw_continues_at(patch, t, e, 1)
        out.append((sub, c0, c1))
    return out


def is_improper(patch: TilingPatch, t: int) -> bool:
    """Has an uncut edge, and an edge continuing at neither endpoint.

    On complete tilings the two edges are automatically distinct (an
    uncut edge always continues somewhere); here they may coincide, which
    also covers truncation-damaged inputs honestly.
    """
    flags = _edge_flags(patch, t)
    has_uncut = any(not sub for sub, _, _ in flags)
    has_dead = any(not c0 and not c1 for _, c0, c1 in flags)
    return has_uncut and has_dead


def classify(patch: TilingPatch, t: int) -> TriangleClass:
    """Class of one triangle; boundary triangles are indeterminate."""
    if not patch.is_interior(t):
        return TriangleClass.INDETERMINATE
    flags = _edge_flags(patch, t)
    subs = [sub for sub, _, _ in flags]
    if not any(subs):
        return TriangleClass.SMALL
    if all(subs):
        return TriangleClass.LARGE
    if is_improper(patch, t):
        return TriangleClass.IMPROPER
    return TriangleClass.OTHER


def lemma5_locate(patch: TilingPatch, t: int, edge_index: int,
                  endpoint: int = 0) -> TrianglePlacement:
    """The unique triangle with a vertex at endpoint A of a subdivided,
    non-continuing edge AB and another vertex D strictly inside AB.

    Raises PreconditionViolated when AB is uncut or continues at A, and
    StructureError when the triangle is not unique or its edge AD turns
    out subdivided (either signals an invalid tiling).
    """
    _require_interior(patch, t)
    entries = patch.edge_interior_vertices(t, edge_index)
    if not entries:
        raise PreconditionViolated("edge is uncut")
    if _raw_continues_at(patch, t, edge_index, endpoint):
        raise PreconditionViolated("edge continues at the chosen endpoint")
    vids = patch.triangle_vertex_ids(t)
    a_vid = vids[edge_index] if endpoint == 0 else vids[(edge_index + 1) % 3]
    inside_vids = {vid for _, vid in entries}

    candidates = []
    for inc in patch.vertex_incidences(a_vid):
        if inc.role != "vertex":
            continue
        other_ids = patch.triangle_vertex_ids(inc.tri)
        hit = [v for v in other_ids if v in inside_vids]
        if hit:
            candidates.append((inc.tri, hit[0]))
    if len(candidates) != 1:
        raise StructureError(
            f"expected exactly one triangle at the endpoint with a vertex "
            f"inside the edge, found {len(candidates)}")
    found_tri, d_vid = candidates[0]
    # the located edge AD must be uncut; checked from the raw subdivision
    # data so that a boundary-marked result does not mask a defect
    ids = patch.triangle_vertex_ids(found_tri)
    for e in range(3):
        pair = {ids[e], ids[(e + 1) % 3]}
        if pair == {a_vid, d_vid}:
            if patch.edge_interior_vertices(found_tri, e):
                raise StructureError("located edge is subdivided")
            break
    else:
        raise StructureError("located triangle has no edge joining A and D")
    return patch.triangles[found_tri]


def check_lemma7(patch: TilingPatch) -> list[Violation]:
    """No interior triangle may be improper."""
    out = []
    for t in patch.interior_indices():
        if is_improper(patch, t):
            out.append(Violation(t, "lemma7", "triangle is improper"))
    return out


def check_lemma8(patch: TilingPatch) -> list[Violation]:
    """If edge AB continues at B, the other edge BC at B must be uncut."""
    out = []
    for t in patch.interior_indices():
        for e in range(3):
            # directed edge e ends at vertex (e+1)%3; the other edge at that
            # vertex is edge (e+1)%3
            if _raw_continues_at(patch, t, e, 1):
                nxt = (e + 1) % 3
                if patch.edge_interior_vertices(t, nxt):
                    out.append(Violation(
                        t, "lemma8",
                        "edge continues at a vertex but the next edge is "
                        "subdivided", edge=e))
            # same test with the edge traversed backwards: continuing at its
            # start constrains the preceding edge
            if _raw_continues_at(patch, t, e, 0):
                prv = (e + 2) % 3
                if patch.edge_interior_vertices(t, prv):
                    out.append(Violation(
                        t, "lemma8",
                        "edge continues at a vertex but the previous edge is "
                        "subdivided", edge=e))
    return out


def check_lemma9(patch: TilingPatch) -> list[Violation]:
    """Every interior triangle is small or large; each large edge carries
    exactly one interior vertex and continues in neither direction."""
    out = []
    for t in patch.interior_indices():
        cls = classify(patch, t)
        if cls not in (TriangleClass.SMALL, TriangleClass.LARGE):
            out.append(Violation(t, "lemma9",
                                 f"classified {cls.value}, not small or large"))
            continue
        if cls is TriangleClass.LARGE:
            for e in range(3):
                k = len(patch.edge_interior_vertices(t, e))
                if k != 1:
                    out.append(Violation(
                        t, "lemma9",
                        f"large edge carries {k} interior vertices", edge=e))
                if _raw_continues_at(patch, t, e, 0) or \
                        _raw_continues_at(patch, t, e, 1):
                    out.append(Violation(
                        t, "lemma9", "large edge continues at an endpoint",
                        edge=e))
    return out


@dataclass(frozen=True)
class Lemma10Result:
    """Nonzero averaging deviations plus triangles skipped for missing
    neighbours."""

    violations: tuple[tuple[int, Scalar], ...]
    skipped: tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma10_neighbors(patch: TilingPatch, t: int) -> list[int | None]:
    """For a large triangle, the triangle hosting each vertex inside one of
    its edges; None where the host is absent or boundary-marked.

    Raises StructureError when a host exists, is interior, and is not
    large, or when a vertex has several hosts.
    """
    out: list[int | None] = []
    for vid in patch.triangle_vertex_ids(t):
        hosts = patch.vertex_edge_hosts(vid)
        if len(hosts) > 1:
            raise StructureError(
                f"vertex {vid} lies inside {len(hosts)} edges")
        if not hosts:
            out.append(None)
            continue
        host_tri, _ = hosts[0]
        if not patch.is_interior(host_tri):
            out.append(None)
            continue
        if classify(patch, host_tri) is not TriangleClass.LARGE:
            raise StructureError(
                f"edge-interior host {host_tri} of a large triangle's vertex "
                f"is not large")
        out.append(host_tri)
    return out


def check_lemma10(patch: TilingPatch) -> Lemma10Result:
    """Each large triangle's side equals the average of its three
    neighbours' sides.  Neighbours outside the window cause the triangle
    to be skipped, not flagged."""
    bad: list[tuple[int, Scalar]] = []
    skipped: list[int] = []
    for t in patch.interior_indices():
        if classify(patch, t) is not TriangleClass.LARGE:
            continue
        nbs = lemma10_neighbors(patch, t)
        if any(n is None for n in nbs):
            skipped.append(t)
            continue
        mean = (patch.side(nbs[0]) + patch.side(nbs[1]) + patch.side(nbs[2])) / 3
        dev = abs(patch.side(t) - mean)
        if dev.sign() > 0:
            bad.append((t, dev))
    return Lemma10Result(tuple(bad), tuple(skipped))
