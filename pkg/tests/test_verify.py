import random
from fractions import Fraction

import pytest

import tritiling as tt
from tritiling import (
    PeriodicSpec,
    Window,
    build_patch,
    conclusions,
    detect_periods,
    exact,
    hypotheses,
    lattices_equal,
    vector_in_lattice,
)


def test_hypotheses_pass_on_periodic(periodic12):
    spec, patch = periodic12
    rep = hypotheses(patch, min(spec.b, spec.c))
    assert rep.passed
    assert rep.disjoint.passed and rep.no_shared_side.passed
    assert rep.min_side.passed and rep.coverage.passed


def test_min_side_fails_when_delta_too_large(periodic12):
    _, patch = periodic12
    rep = hypotheses(patch, 2)
    assert not rep.min_side.passed
    assert rep.disjoint.passed


def test_delta_must_be_positive(periodic12):
    _, patch = periodic12
    with pytest.raises(ValueError):
        hypotheses(patch, 0)


def test_hypotheses_fail_on_lattice(lattice1):
    rep = hypotheses(lattice1, 1)
    assert not rep.passed
    assert not rep.no_shared_side.passed
    assert rep.disjoint.passed
    assert rep.min_side.passed
    assert rep.coverage.passed


def test_hypotheses_on_spiral_annulus_window():
    """A rectangular window placed inside the covered annulus (away from
    the accumulation point) passes all four requirements."""
    spec = tt.SpiralSpec(p=(0.0, 0.0), a=(1.0, 0.0), i_min=-12, i_max=12)
    placements = tt.spiral_placements(spec)
    win = Window(tt.approx(0.5), tt.approx(3.5), tt.approx(-1.5), tt.approx(1.5))
    inside = [t for t in placements
              if tt.triangle_window_overlap(t, win, open_=True)]
    patch = build_patch(inside, win, margin=tt.approx(0.3))
    rep = hypotheses(patch, 0.05)
    assert rep.passed, str(rep)


def test_conclusions_on_periodic_12(periodic12):
    _, patch = periodic12
    rep = conclusions(patch)
    assert rep.passed
    assert "3 distinct sides" in rep.side_count.detail


def test_conclusions_on_periodic_11(periodic11):
    _, patch = periodic11
    rep = conclusions(patch)
    assert rep.passed
    assert "2 distinct sides" in rep.side_count.detail


def test_conclusions_fail_on_spiral(spiral10):
    _, patch = spiral10
    rep = conclusions(patch)
    assert not rep.side_count.passed
    assert not rep.passed


def test_detect_periods_matches_construction(periodic12):
    spec, patch = periodic12
    periods = detect_periods(patch)
    assert len(periods) == 2
    assert lattices_equal(periods, tt.periodic_lattice_vectors(spec))


def test_detect_periods_lattice(lattice1):
    periods = detect_periods(lattice1)
    assert len(periods) == 2
    expected = ((exact(1), exact(0)),
                (exact(Fraction(1, 2)), tt.ExactScalar(0, Fraction(1, 2))))
    assert lattices_equal(periods, expected)


def test_detect_periods_spiral_empty(spiral10):
    _, patch = spiral10
    assert detect_periods(patch) == []


def test_periods_stable_under_recanonicalization(periodic12):
    spec, _ = periodic12
    w = Window(exact(0), exact(18), exact(-18), exact(0))
    patch = tt.periodic_three_size(spec, w)
    base = detect_periods(patch)
    tris = list(patch.triangles)
    rng = random.Random(11)
    rng.shuffle(tris)
    again = build_patch(tris, w, margin=patch.margin)
    assert detect_periods(again) == base


def test_periods_closed_under_negation(periodic12):
    _, patch = periodic12
    periods = detect_periods(patch)
    for v in periods:
        assert vector_in_lattice((-v[0], -v[1]), tuple(periods))


def test_lattice_equality_is_basis_independent():
    u = (exact(2), exact(0))
    v = (exact(0), exact(2))
    # a unimodular change of basis spans the same lattice
    w1 = (exact(2), exact(2))
    w2 = (exact(2), exact(4))
    assert lattices_equal((u, v), (w1, w2))
    # a sublattice does not
    assert not lattices_equal((u, v), ((exact(4), exact(0)), v))
    assert not lattices_equal(((exact(4), exact(0)), v), (u, v))


def test_verdicts_deterministic(periodic12):
    spec, patch = periodic12
    r1 = hypotheses(patch, 1)
    r2 = hypotheses(patch, 1)
    assert r1 == r2
    assert conclusions(patch).lines() == conclusions(patch).lines()


def test_coverage_detects_missing_triangle(periodic12):
    _, patch = periodic12
    smalls = [i for i in patch.interior_indices()
              if tt.classify(patch, i) is tt.TriangleClass.SMALL]
    victim = smalls[0]
    rest = [t for i, t in enumerate(patch.triangles) if i != victim]
    hole = build_patch(rest, patch.window, margin=patch.margin)
    rep = hypotheses(hole, 1)
    assert not rep.coverage.passed
    assert rep.disjoint.passed and rep.no_shared_side.passed
