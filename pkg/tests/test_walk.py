import numpy as np
import pytest

import tritiling as tt
from tritiling import (
    GraphNode,
    LargeAdjacencyGraph,
    PeriodicSpec,
    StepSet,
    Window,
    contradiction_demo,
    exact,
    extract_graph,
    martingale_deviation,
    simulate,
)


def test_extract_graph_offsets(periodic11):
    spec, patch = periodic11
    g = extract_graph(patch)
    assert len(g.nodes) > 50
    assert len(g.complete_nodes()) > 20
    assert g.step_vectors is not None
    t1, t2 = tt.periodic_lattice_vectors(spec)
    s1, s2, s3 = g.step_vectors
    assert s1[0] == t1[0] and s1[1] == t1[1]
    assert s2[0] == t2[0] and s2[1] == t2[1]
    assert s3[0] == -(t1[0] + t2[0]) and s3[1] == -(t1[1] + t2[1])
    # zero sum and equal lengths
    sq = [v[0] * v[0] + v[1] * v[1] for v in (s1, s2, s3)]
    assert sq[0] == sq[1] == sq[2]


def test_graph_neighbor_count(periodic11):
    _, patch = periodic11
    g = extract_graph(patch)
    for n in g.complete_nodes():
        assert len(n.neighbors) == 3


def test_small_window_gives_missing_neighbors():
    spec = PeriodicSpec(1, 2)
    w = Window(exact(0), exact(20), exact(-20), exact(0))
    patch = tt.periodic_three_size(spec, w)
    g = extract_graph(patch)
    assert len(g.nodes) > 0
    assert any(m is None for n in g.nodes for m in n.neighbors)
    if not g.complete_nodes():
        with pytest.raises(tt.StructureError):
            g.step_set()


def test_lattice_has_no_large_nodes(lattice1):
    g = extract_graph(lattice1)
    assert g.nodes == ()
    with pytest.raises(tt.StructureError):
        g.step_set()


def test_martingale_deviation_on_patch_graph(periodic11):
    _, patch = periodic11
    dev = martingale_deviation(extract_graph(patch))
    assert dev is not None and dev.sign() == 0


def _synthetic_graph(center_side, neighbor_sides):
    nodes = [GraphNode(0, (0.0, 0.0), exact(center_side), (1, 2, 3))]
    for k, s in enumerate(neighbor_sides, start=1):
        nodes.append(GraphNode(k, (float(k), 0.0), exact(s),
                               (None, None, None)))
    return LargeAdjacencyGraph(tuple(nodes))


def test_martingale_deviation_synthetic():
    assert martingale_deviation(_synthetic_graph(3, (3, 3, 3))).sign() == 0
    assert martingale_deviation(_synthetic_graph(2, (1, 2, 3))).sign() == 0
    dev = martingale_deviation(_synthetic_graph(2, (1, 2, 4)))
    assert dev == tt.ExactScalar(tt.exact(0).u + 1, 0) / 3
    empty = LargeAdjacencyGraph((GraphNode(0, (0, 0), exact(1),
                                           (None, None, None)),))
    assert martingale_deviation(empty) is None


def test_step_set_validation():
    with pytest.raises(ValueError):
        StepSet((1.0, 0.0), (0.0, 1.0), (0.0, 0.0))
    ss = StepSet((1.0, 0.0), (0.0, 1.0), (-1.0, -1.0))
    assert ss.msd_rate() == pytest.approx((1 + 1 + 2) / 3)


def _unit_steps():
    return StepSet((1.0, 0.0), (0.0, 1.0), (-1.0, -1.0))


def test_simulate_reproducible_and_chunk_independent():
    ss = _unit_steps()
    a = simulate(ss, 400, 600, seed=123)
    b = simulate(ss, 400, 600, seed=123)
    c = simulate(ss, 400, 600, seed=123, chunk=97)
    assert np.array_equal(a.msd, b.msd)
    assert np.array_equal(a.msd, c.msd)
    assert np.array_equal(a.first_return_counts, c.first_return_counts)
    d = simulate(ss, 400, 600, seed=124)
    assert not np.array_equal(a.msd, d.msd)


def test_simulate_msd_matches_rate():
    ss = _unit_steps()
    stats = simulate(ss, 2000, 4000, seed=2024)
    predicted = 2000 * ss.msd_rate()
    assert abs(stats.msd[-1] / predicted - 1.0) < 0.05


def test_return_frequency_nondecreasing():
    ss = _unit_steps()
    stats = simulate(ss, 1000, 500, seed=3)
    freq = stats.return_frequency
    assert np.all(np.diff(freq) >= 0)
    assert stats.return_frequency_at(10) <= stats.return_frequency_at(100) \
        <= stats.return_frequency_at(1000)
    assert stats.return_frequency_at(1000) > 0.3


def test_mean_displacement_small():
    ss = _unit_steps()
    stats = simulate(ss, 1000, 4000, seed=9)
    mx, my = stats.mean_displacement
    # zero-drift walk: the mean is a few standard errors of sqrt(N/trials)
    bound = 6 * (1000 / 4000) ** 0.5
    assert abs(mx) < bound and abs(my) < bound


def test_constant_size_field_stops_exactly():
    ss = _unit_steps()
    stats = simulate(ss, 300, 200, seed=5, base_size=2.0)
    assert stats.expected_size_at_stop == 2.0


def test_contradiction_demo_consistent_when_equal():
    rep = contradiction_demo(_unit_steps(), 2.0, 2.0, horizon=50,
                             trials=200, seed=1)
    assert rep.verdict.startswith("consistent")
    assert rep.expected_stop_size == 2.0


def test_contradiction_demo_flags_inconsistency():
    rep = contradiction_demo(_unit_steps(), 1.0, 2.0, horizon=4000,
                             trials=3000, seed=17, target=(1, 0))
    assert rep.threshold == 0.5
    assert rep.hit_frequency >= 0.5
    assert rep.verdict.startswith("inconsistent")
    assert rep.expected_stop_size > rep.martingale_value


def test_contradiction_demo_inconclusive_at_tiny_horizon():
    rep = contradiction_demo(_unit_steps(), 1.0, 2.0, horizon=2,
                             trials=50, seed=3, target=(40, 40))
    assert rep.hit_frequency == 0.0
    assert rep.verdict.startswith("inconclusive")
    assert "never reached" in rep.verdict


def test_walk_stats_text_deterministic():
    ss = _unit_steps()
    a = simulate(ss, 200, 100, seed=77)
    b = simulate(ss, 200, 100, seed=77)
    assert a.key_values() == b.key_values()
    assert a.csv_text() == b.csv_text()


def test_simulate_validation():
    with pytest.raises(ValueError):
        simulate(_unit_steps(), 0, 10, seed=1)
    with pytest.raises(ValueError):
        simulate(_unit_steps(), 10, 0, seed=1)


def test_patch_step_set_runs(periodic11):
    spec, patch = periodic11
    g = extract_graph(patch)
    ss = g.step_set()
    a2 = float(spec.a * spec.a - spec.a * spec.b + spec.b * spec.b)
    assert ss.msd_rate() == pytest.approx(a2)
    stats = simulate(ss, 100, 50, seed=1)
    assert stats.msd.shape == (100,)
