"""Top-level verification of a patch.

``hypotheses`` checks the requirements a patch must satisfy before the
structural theory applies: pairwise disjoint interiors, no two triangles
sharing a full side, sides bounded below by a caller-supplied delta, and
gap-free coverage of the margin-shrunk window.

``conclusions`` checks what must then follow on any valid patch: at most
three side lengths with the largest equal to the sum of the smaller ones,
all large triangles being translates of one fixed triangle, and a rank-2
lattice of translation symmetries.

``detect_periods`` finds that lattice from scratch by testing anchor
differences; bases are compared as lattices, not as raw vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BackendMismatch, SqrtNotRepresentable
from .geometry import ExactScalar, FloatScalar, Scalar, TrianglePlacement
from .model import TilingPatch, clipped_area_in
from .structure import TriangleClass, classify

Vec = tuple[Scalar, Scalar]


@dataclass(frozen=True)
class Verdict:
    passed: bool
    detail: str = ""

    @property
    def word(self) -> str:
        return "pass" if self.passed else "FAIL"


@dataclass(frozen=True)
class HypothesesReport:
    disjoint: Verdict
    no_shared_side: Verdict
    min_side: Verdict
    coverage: Verdict

    @property
    def passed(self) -> bool:
        return (self.disjoint.passed and self.no_shared_side.passed
                and self.min_side.passed and self.coverage.passed)

    def lines(self) -> list[str]:
        out = []
        for name in ("disjoint", "no_shared_side", "min_side", "coverage"):
            v: Verdict = getattr(self, name)
            out.append(f"hypotheses.{name}={v.word}"
                       + (f" ({v.detail})" if v.detail else ""))
        return out

    def __str__(self):
        return "\n".join(self.lines())


@dataclass(frozen=True)
class ConclusionsReport:
    side_count: Verdict
    additivity: Verdict
    large_congruent: Verdict
    periodic: Verdict
    periods: tuple[Vec, ...]

    @property
    def passed(self) -> bool:
        return (self.side_count.passed and self.additivity.passed
                and self.large_congruent.passed and self.periodic.passed)

    def lines(self) -> list[str]:
        out = []
        for name in ("side_count", "additivity", "large_congruent", "periodic"):
            v: Verdict = getattr(self, name)
            out.append(f"conclusions.{name}={v.word}"
                       + (f" ({v.detail})" if v.detail else ""))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _coerce_scalar(patch: TilingPatch, x) -> Scalar:
    if isinstance(x, ExactScalar):
        if patch.backend != "exact":
            raise BackendMismatch("exact value for a float patch")
        return x
    if isinstance(x, FloatScalar):
        if patch.backend != "float":
            raise BackendMismatch("float value for an exact patch")
        return x
    if isinstance(x, (int, Fraction)) and patch.backend == "exact":
        return ExactScalar(x)
    if isinstance(x, (int, float)) and patch.backend == "float":
        return FloatScalar(float(x), patch.eps)
    raise BackendMismatch(f"cannot use {x!r} with a {patch.backend} patch")


def shared_side_pairs(patch: TilingPatch, limit: int | None = None
                      ) -> list[tuple[int, int]]:
    """Pairs of triangles whose edges coincide as unordered vertex pairs."""
    seen: dict[tuple[int, int], int] = {}
    out = []
    for i in range(len(patch.triangles)):
        ids = patch.triangle_vertex_ids(i)
        for e in range(3):
            u, v = ids[e], ids[(e + 1) % 3]
            key = (u, v) if u < v else (v, u)
            j = seen.get(key)
            if j is None:
                seen[key] = i
            elif j != i:
                out.append((j, i))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def hypotheses(patch: TilingPatch, delta) -> HypothesesReport:
    """Check the four requirements on a patch; failures become verdicts."""
    delta_s = _coerce_scalar(patch, delta)
    if delta_s.sign() <= 0:
        raise ValueError("delta must be positive")

    overlaps = patch.recheck_overlaps(limit=1)
    disjoint = Verdict(not overlaps,
                       "" if not overlaps else
                       f"triangles {overlaps[0][0]} and {overlaps[0][1]} overlap")

    shared = shared_side_pairs(patch, limit=1)
    no_shared = Verdict(not shared,
                        "" if not shared else
                        f"triangles {shared[0][0]} and {shared[0][1]} share a side")

    delta_sq = delta_s * delta_s
    low = None
    for i in range(len(patch.triangles)):
        if (patch.sq_side(i) - delta_sq).sign() < 0:
            low = i
            break
    if patch.triangles:
        min_sq = min((patch.sq_side(i) for i in range(len(patch.triangles))),
                     key=lambda s: s.to_float())
        min_txt = f"min_side={_fmt(min_sq.to_float() ** 0.5)}, delta={_fmt(delta_s.to_float())}"
    else:
        min_txt = "empty patch"
    min_side = Verdict(low is None,
                       min_txt if low is None else
                       f"triangle {low} has side below delta ({min_txt})")

    region = patch.window.shrink(patch.margin)
    if region is None:
        coverage = Verdict(True, "margin leaves no region to check")
    else:
        defect = region.area() - clipped_area_in(patch, region)
        if patch.backend == "exact":
            ok = defect.sign() == 0
            coverage = Verdict(ok, f"defect={_fmt(defect.to_float())} (exact)")
        else:
            tol = patch.eps * region.area().to_float()
            ok = abs(defect.to_float()) <= tol
            coverage = Verdict(ok, f"defect={_fmt(defect.to_float())}, "
                                   f"tol={_fmt(tol)}")
    return HypothesesReport(disjoint, no_shared, min_side, coverage)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# conclusions
# ---------------------------------------------------------------------------

def _distinct_sq_sides(patch: TilingPatch, tris: list[int]) -> list[Scalar]:
    """Distinct squared side lengths, ascending."""
    out: list[Scalar] = []
    for t in tris:
        s = patch.sq_side(t)
        if not any((s - o).sign() == 0 for o in out):
            out.append(s)
    out.sort(key=lambda s: s.to_float())
    return out


def _additivity_holds(sq: list[Scalar]) -> bool:
    """max = sum of the smaller values, tested on squares only.

    a = b + c  iff  (a^2 - b^2 - c^2)^2 = 4 b^2 c^2 with a the largest;
    a = 2b     iff  a^2 = 4 b^2.
    """
    if len(sq) == 2:
        b2, a2 = sq
        return (a2 - 4 * b2).sign() == 0
    if len(sq) == 3:
        c2, b2, a2 = sq
        lhs = a2 - b2 - c2
        return (lhs * lhs - 4 * b2 * c2).sign() == 0 and lhs.sign() > 0
    return False


def _shape_signature(t: TrianglePlacement):
    return ((t.v1.x - t.v0.x), (t.v1.y - t.v0.y),
            (t.v2.x - t.v0.x), (t.v2.y - t.v0.y))


def conclusions(patch: TilingPatch) -> ConclusionsReport:
    interior = patch.interior_indices()
    if not interior:
        nothing = Verdict(False, "no interior triangles")
        return ConclusionsReport(nothing, nothing, nothing, nothing, ())

    sq = _distinct_sq_sides(patch, interior)
    side_txt = ", ".join(_fmt(s.to_float() ** 0.5) for s in sq)
    side_count = Verdict(len(sq) <= 3, f"{len(sq)} distinct sides: {side_txt}")

    if len(sq) in (2, 3):
        additivity = Verdict(_additivity_holds(sq),
                             "largest = sum of the others" if
                             _additivity_holds(sq) else
                             f"additivity fails for sides {side_txt}")
    elif len(sq) == 1:
        additivity = Verdict(False, "a single side length cannot split")
    else:
        additivity = Verdict(False, f"{len(sq)} distinct sides")

    larges = [t for t in interior if classify(patch, t) is TriangleClass.LARGE]
    if not larges:
        large_congruent = Verdict(False, "no interior large triangles")
    else:
        sig0 = _shape_signature(patch.triangles[larges[0]])
        same = all(
            all((a - b).sign() == 0 for a, b in
                zip(_shape_signature(patch.triangles[t]), sig0))
            for t in larges[1:])
        large_congruent = Verdict(same,
                                  f"{len(larges)} large triangles"
                                  + ("" if same else " with differing shapes"))

    periods = tuple(detect_periods(patch))
    periodic = Verdict(len(periods) == 2,
                       "basis " + "; ".join(
                           f"({_fmt(v[0].to_float())}, {_fmt(v[1].to_float())})"
                           for v in periods) if periods else "no period found")

    return ConclusionsReport(side_count, additivity, large_congruent,
                             periodic, periods)


# ---------------------------------------------------------------------------
# period detection
# ---------------------------------------------------------------------------

def _sq_norm(v: Vec) -> Scalar:
    return v[0] * v[0] + v[1] * v[1]


def _vec_key(v: Vec):
    return (v[0].sort_key(), v[1].sort_key())


def _cross_vec(u: Vec, v: Vec) -> Scalar:
    return u[0] * v[1] - u[1] * v[0]


def _dot_vec(u: Vec, v: Vec) -> Scalar:
    return u[0] * v[0] + u[1] * v[1]


def _is_period(patch: TilingPatch, v: Vec) -> bool:
    """Translation by v maps every interior triangle whose image is deep
    enough inside the window onto a stored triangle."""
    region = patch.window.shrink(patch.margin) or patch.window
    mapped = 0
    for t in patch.interior_indices():
        img = patch.triangles[t].translate(v[0], v[1])
        if not all(region.contains_point(p) for p in img.vertices):
            continue
        if patch.find_triangle(img) is None:
            return False
        mapped += 1
    return mapped > 0


def _nearest_int(x: Scalar) -> int:
    return round(x.to_float())


def _gauss_reduce(u: Vec, v: Vec) -> tuple[Vec, Vec]:
    """Lagrange-Gauss reduction of a rank-2 basis."""
    while True:
        if (_sq_norm(v) - _sq_norm(u)).sign() < 0:
            u, v = v, u
        base = _nearest_int(_dot_vec(u, v) / _sq_norm(u))
        best_m, best_norm = 0, _sq_norm(v)
        for m in (base - 1, base, base + 1):
            if m == 0:
                continue
            cand = (v[0] - u[0] * m, v[1] - u[1] * m)
            n = _sq_norm(cand)
            if (n - best_norm).sign() < 0:
                best_m, best_norm = m, n
        if best_m == 0:
            return u, v
        v = (v[0] - u[0] * best_m, v[1] - u[1] * best_m)


def _canonical_sign(v: Vec) -> Vec:
    if v[1].sign() < 0 or (v[1].sign() == 0 and v[0].sign() < 0):
        return (-v[0], -v[1])
    return v


def detect_periods(patch: TilingPatch) -> list[Vec]:
    """A reduced basis of at most two independent translation symmetries.

    Candidate vectors are differences of anchor vertices of one congruence
    class of triangles (the interior large triangles when at least two
    exist, otherwise the most numerous interior class).  Candidates are
    tested shortest first; the two shortest independent periods of a 2D
    lattice always form a basis for it.
    """
    interior = patch.interior_indices()
    larges = [t for t in interior if classify(patch, t) is TriangleClass.LARGE]
    if len(larges) >= 2:
        group = larges
    else:
        by_shape: dict = {}
        for t in interior:
            key = tuple(s.sort_key() if patch.backend == "exact"
                        else round(s.to_float(), 9)
                        for s in _shape_signature(patch.triangles[t]))
            by_shape.setdefault(key, []).append(t)
        group = max(by_shape.values(), key=len, default=[])
        if len(group) < 2:
            return []

    anchors = [patch.triangles[t].v0 for t in group]
    cands: dict = {}
    for i, a in enumerate(anchors):
        for j, b in enumerate(anchors):
            if i == j:
                continue
            v: Vec = (b.x - a.x, b.y - a.y)
            if v[0].sign() == 0 and v[1].sign() == 0:
                continue
            cands.setdefault(_vec_key(_canonical_sign(v)), _canonical_sign(v))

    ordered = sorted(cands.values(),
                     key=lambda v: (_sq_norm(v).to_float(), _vec_key(v)))
    periods: list[Vec] = []
    for v in ordered:
        if len(periods) == 1 and _cross_vec(periods[0], v).sign() == 0:
            continue
        if _is_period(patch, v):
            periods.append(v)
            if len(periods) == 2:
                break
    if len(periods) == 2:
        u, v = _gauss_reduce(periods[0], periods[1])
        periods = [_canonical_sign(u), _canonical_sign(v)]
        periods.sort(key=lambda w: (_sq_norm(w).to_float(), _vec_key(w)))
    return periods


def _int_coefficient(x: Scalar) -> int | None:
    """x as a plain integer, or None."""
    if x.is_exact:
        if x.v != 0 or x.u.denominator != 1:
            return None
        return int(x.u)
    k = round(x.to_float())
    if abs(x.to_float() - k) <= max(1e-6, x.eps * 1e3):
        return k
    return None


def vector_in_lattice(v: Vec, basis: tuple[Vec, Vec]) -> bool:
    u, w = basis
    det = _cross_vec(u, w)
    if det.sign() == 0:
        return False
    m = _cross_vec(v, w) / det
    n = _cross_vec(u, v) / det
    mi, ni = _int_coefficient(m), _int_coefficient(n)
    if mi is None or ni is None:
        return False
    rx = v[0] - (u[0] * mi + w[0] * ni)
    ry = v[1] - (u[1] * mi + w[1] * ni)
    return rx.sign() == 0 and ry.sign() == 0


def lattices_equal(basis_a, basis_b) -> bool:
    """Do two rank-2 bases generate the same lattice?"""
    if len(basis_a) != 2 or len(basis_b) != 2:
        return False
    a = (tuple(basis_a[0]), tuple(basis_a[1]))
    b = (tuple(basis_b[0]), tuple(basis_b[1]))
    return (all(vector_in_lattice(v, b) for v in a)
            and all(vector_in_lattice(v, a) for v in b))
