"""The large-triangle adjacency graph and the random walk on it.

Every large triangle has exactly three neighbours: the triangles hosting
its vertices in the interiors of their edges.  On valid patches those
hosts are themselves large, the hop offsets are the same three vectors
everywhere, and the three offsets sum to zero, so the walk is a
zero-drift walk on a rank-2 lattice.  Side lengths along the walk form a
martingale (each node's side is the average of its neighbours' sides),
which is what ``martingale_deviation`` measures.

Randomness policy: trial ``t`` of a simulation draws its steps from an
independent Philox stream with the 128-bit key ``(seed, t)``.  Philox is
counter based and portable, so results are bit-reproducible for a given
(seed, steps, trials) on any platform, independent of chunking.  Keying
on the pair rather than on ``seed ^ t`` matters: xor-derived key sets
coincide wholesale for nearby seeds (for example seeds 123 and 124 share
all trial streams whenever the trial count is a multiple of 8), which
silently yields identical statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructureError
from .geometry import Scalar
from .model import TilingPatch
from .structure import TriangleClass, classify, lemma10_neighbors

Vec = tuple[Scalar, Scalar]


@dataclass(frozen=True)
class GraphNode:
    tri: int                      # triangle index in the patch
    anchor: tuple[float, float]   # float shadow of the anchor vertex
    side: Scalar
    neighbors: tuple[int | None, int | None, int | None]  # node ids, None = missing


@dataclass(frozen=True)
class LargeAdjacencyGraph:
    nodes: tuple[GraphNode, ...]
    step_vectors: tuple[Vec, Vec, Vec] | None = None

    def complete_nodes(self) -> list[GraphNode]:
        return [n for n in self.nodes if all(m is not None for m in n.neighbors)]

    def step_set(self) -> "StepSet":
        if self.step_vectors is None:
            raise StructureError(
                "graph has no consistent zero-sum step vectors; "
                "the patch is not a periodic large-triangle lattice")
        return StepSet.from_scalars(self.step_vectors)


def extract_graph(patch: TilingPatch) -> LargeAdjacencyGraph:
    """Adjacency graph of the interior large triangles.

    Neighbour slots follow the vertex order of each triangle.  A neighbour
    is None when the hosting triangle is absent or boundary-marked.  When
    every complete node sees the same three hop offsets and they sum to
    zero, the offsets are exposed as ``step_vectors``.
    """
    larges = [t for t in patch.interior_indices()
              if classify(patch, t) is TriangleClass.LARGE]
    node_of_tri = {t: k for k, t in enumerate(larges)}
    nodes = []
    for t in larges:
        hosts = lemma10_neighbors(patch, t)
        neighbors = tuple(node_of_tri.get(h) if h is not None else None
                          for h in hosts)
        v0 = patch.triangles[t].v0
        nodes.append(GraphNode(t, v0.to_floats(), patch.side(t), neighbors))

    step_vectors = None
    offsets: list[tuple[Vec, Vec, Vec]] = []
    for n in nodes:
        if any(m is None for m in n.neighbors):
            continue
        a0 = patch.triangles[n.tri].v0
        offs = []
        for m in n.neighbors:
            b0 = patch.triangles[nodes[m].tri].v0
            offs.append((b0.x - a0.x, b0.y - a0.y))
        offsets.append(tuple(offs))
    if offsets:
        ref = offsets[0]
        consistent = all(
            all((o[k][0] - ref[k][0]).sign() == 0 and
                (o[k][1] - ref[k][1]).sign() == 0 for k in range(3))
            for o in offsets[1:])
        if consistent:
            sx = ref[0][0] + ref[1][0] + ref[2][0]
            sy = ref[0][1] + ref[1][1] + ref[2][1]
            if sx.sign() == 0 and sy.sign() == 0:
                step_vectors = ref
    return LargeAdjacencyGraph(tuple(nodes), step_vectors)


def martingale_deviation(graph: LargeAdjacencyGraph) -> Scalar | None:
    """Largest |side - mean(neighbour sides)| over nodes with all three
    neighbours present; None when no node qualifies.  Zero on every patch
    that passes the structural checks."""
    best: Scalar | None = None
    for n in graph.complete_nodes():
        s = (graph.nodes[n.neighbors[0]].side
             + graph.nodes[n.neighbors[1]].side
             + graph.nodes[n.neighbors[2]].side) / 3
        dev = abs(n.side - s)
        if best is None or (dev - best).sign() > 0:
            best = dev
    return best


# ---------------------------------------------------------------------------
# the lattice walk
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepSet:
    """Three zero-sum step vectors spanning a rank-2 lattice."""

    s1: tuple[float, float]
    s2: tuple[float, float]
    s3: tuple[float, float]

    def __post_init__(self):
        scale = max(1.0, *(abs(c) for v in (self.s1, self.s2, self.s3) for c in v))
        rx = self.s1[0] + self.s2[0] + self.s3[0]
        ry = self.s1[1] + self.s2[1] + self.s3[1]
        if abs(rx) > 1e-9 * scale or abs(ry) > 1e-9 * scale:
            raise ValueError("step vectors must sum to zero")

    @classmethod
    def from_scalars(cls, vectors) -> "StepSet":
        (a, b, c) = vectors
        return cls((a[0].to_float(), a[1].to_float()),
                   (b[0].to_float(), b[1].to_float()),
                   (c[0].to_float(), c[1].to_float()))

    def gram(self) -> tuple[float, float, float]:
        g11 = self.s1[0] ** 2 + self.s1[1] ** 2
        g22 = self.s2[0] ** 2 + self.s2[1] ** 2
        g12 = self.s1[0] * self.s2[0] + self.s1[1] * self.s2[1]
        return g11, g12, g22

    def msd_rate(self) -> float:
        """Expected squared displacement gained per step."""
        return sum(v[0] ** 2 + v[1] ** 2 for v in (self.s1, self.s2, self.s3)) / 3


@dataclass(frozen=True)
class WalkStats:
    steps: int
    trials: int
    seed: int
    step_set: StepSet
    msd: np.ndarray                    # mean squared displacement after step k+1
    first_return_counts: np.ndarray    # index s: trials first returning at step s
    mean_displacement: tuple[float, float]
    expected_size_at_stop: float | None = None
    hit_frequency: float | None = None
    target: tuple[int, int] | None = None

    @property
    def return_frequency(self) -> np.ndarray:
        """Fraction of trials that returned to the start by step k+1."""
        return np.cumsum(self.first_return_counts)[1:] / self.trials

    def return_frequency_at(self, n: int) -> float:
        if not 1 <= n <= self.steps:
            raise ValueError(f"horizon {n} outside 1..{self.steps}")
        return float(self.return_frequency[n - 1])

    def key_values(self) -> list[str]:
        out = [
            f"steps={self.steps}",
            f"trials={self.trials}",
            f"seed={self.seed}",
            f"msd_final={self.msd[-1]:.17g}",
            f"msd_rate_expected={self.step_set.msd_rate():.17g}",
            f"return_frequency_final={self.return_frequency[-1]:.17g}",
            f"mean_displacement_x={self.mean_displacement[0]:.17g}",
            f"mean_displacement_y={self.mean_displacement[1]:.17g}",
        ]
        if self.hit_frequency is not None:
            out.append(f"hit_frequency={self.hit_frequency:.17g}")
        if self.expected_size_at_stop is not None:
            out.append(f"expected_size_at_stop={self.expected_size_at_stop:.17g}")
        return out

    def csv_text(self) -> str:
        freq = self.return_frequency
        lines = ["step,msd,return_freq"]
        for k in range(self.steps):
            lines.append(f"{k + 1},{self.msd[k]:.17g},{freq[k]:.17g}")
        return "\n".join(lines) + "\n"


def _trial_steps(seed: int, trial: int, steps: int) -> np.ndarray:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, trial], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.integers(0, 3, size=steps, dtype=np.uint8)


def simulate(step_set: StepSet, steps: int, trials: int, seed: int, *,
             target: tuple[int, int] | None = None,
             base_size: float | None = None,
             target_size: float | None = None,
             chunk: int = 512) -> WalkStats:
    """Zero-drift lattice walk with i.i.d. uniform choices among 3 steps.

    Positions are tracked in lattice coordinates (i, j), meaning
    i * s1 + j * s2; step s3 decrements both since s3 = -s1 - s2.

    With ``target`` given (in lattice coordinates), trials stop at the
    first visit to the target or at the horizon, and the stopped value of
    the size field (``base_size`` everywhere, ``target_size`` at the
    target) is averaged.  With only ``base_size`` given the field is
    constant, so the stopped value is exactly ``base_size``.
    """
    if steps < 1 or trials < 1:
        raise ValueError("steps and trials must be at least 1")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    g11, g12, g22 = step_set.gram()

    msd_sum = np.zeros(steps, dtype=np.float64)
    first_ret = np.zeros(steps + 1, dtype=np.int64)
    sum_i = 0
    sum_j = 0
    hit_count = 0

    for t0 in range(0, trials, chunk):
        t1 = min(trials, t0 + chunk)
        k = t1 - t0
        mat = np.empty((k, steps), dtype=np.uint8)
        for t in range(t0, t1):
            mat[t - t0] = _trial_steps(seed, t, steps)
        di = (mat == 0).astype(np.int32) - (mat == 2).astype(np.int32)
        dj = (mat == 1).astype(np.int32) - (mat == 2).astype(np.int32)
        ipos = np.cumsum(di, axis=1, dtype=np.int32)
        jpos = np.cumsum(dj, axis=1, dtype=np.int32)

        fi = ipos.astype(np.float64)
        fj = jpos.astype(np.float64)
        msd_sum += (g11 * fi * fi + 2.0 * g12 * fi * fj + g22 * fj * fj).sum(axis=0)

        at_origin = (ipos == 0) & (jpos == 0)
        returned = at_origin.any(axis=1)
        first = at_origin.argmax(axis=1) + 1
        first_ret += np.bincount(first[returned], minlength=steps + 1)[:steps + 1]

        sum_i += int(ipos[:, -1].sum())
        sum_j += int(jpos[:, -1].sum())

        if target is not None:
            tm, tn = target
            hit = ((ipos == tm) & (jpos == tn)).any(axis=1)
            hit_count += int(hit.sum())

    mean_i = sum_i / trials
    mean_j = sum_j / trials
    mean_disp = (mean_i * step_set.s1[0] + mean_j * step_set.s2[0],
                 mean_i * step_set.s1[1] + mean_j * step_set.s2[1])

    hit_frequency = None
    expected_stop = None
    if target is not None:
        hit_frequency = hit_count / trials
        if base_size is not None:
            ts = base_size if target_size is None else target_size
            expected_stop = (hit_count * ts
                             + (trials - hit_count) * base_size) / trials
    elif base_size is not None:
        # constant size field: the stopped value is the constant, exactly
        expected_stop = float(base_size)

    return WalkStats(steps=steps, trials=trials, seed=seed, step_set=step_set,
                     msd=msd_sum / trials, first_return_counts=first_ret,
                     mean_displacement=mean_disp,
                     expected_size_at_stop=expected_stop,
                     hit_frequency=hit_frequency, target=target)


@dataclass(frozen=True)
class ContradictionReport:
    """Numerical demonstration that no valid tiling can carry two distinct
    large sizes: the stopped-walk expectation must equal the start size a,
    yet once the hitting frequency reaches a/a', it must strictly exceed a.
    A demonstrator, not a proof checker."""

    a: float
    a_prime: float
    horizon: int
    trials: int
    seed: int
    hit_frequency: float
    expected_stop_size: float
    martingale_value: float
    threshold: float
    verdict: str

    def lines(self) -> list[str]:
        return [
            f"a={self.a:.17g}",
            f"a_prime={self.a_prime:.17g}",
            f"horizon={self.horizon}",
            f"trials={self.trials}",
            f"seed={self.seed}",
            f"hit_frequency={self.hit_frequency:.17g}",
            f"expected_stop_size={self.expected_stop_size:.17g}",
            f"martingale_value={self.martingale_value:.17g}",
            f"threshold={self.threshold:.17g}",
            f"verdict={self.verdict}",
        ]


def contradiction_demo(step_set: StepSet, a: float, a_prime: float,
                       horizon: int, trials: int = 10_000, seed: int = 0,
                       target: tuple[int, int] = (1, 0)) -> ContradictionReport:
    """Run the stopped walk with size a everywhere and a' at one target node."""
    a = float(a)
    a_prime = float(a_prime)
    if not (0 < a <= a_prime):
        raise ValueError("need 0 < a <= a_prime")
    stats = simulate(step_set, horizon, trials, seed,
                     target=target, base_size=a, target_size=a_prime)
    threshold = a / a_prime
    freq = stats.hit_frequency or 0.0
    if a == a_prime:
        verdict = "consistent: equal sizes make the field constant"
    elif freq == 0.0:
        verdict = "inconclusive at this horizon: target never reached"
    elif freq >= threshold:
        verdict = ("inconsistent: expected stopped size "
                   f"{stats.expected_size_at_stop:.6g} exceeds the martingale "
                   f"value {a:.6g} while hit frequency {freq:.4g} >= a/a' "
                   f"= {threshold:.4g}")
    else:
        verdict = ("inconclusive at this horizon: hit frequency "
                   f"{freq:.4g} below a/a' = {threshold:.4g}")
    return ContradictionReport(a=a, a_prime=a_prime, horizon=horizon,
                               trials=trials, seed=seed,
                               hit_frequency=freq,
                               expected_stop_size=stats.expected_size_at_stop,
                               martingale_value=a, threshold=threshold,
                               verdict=verdict)
