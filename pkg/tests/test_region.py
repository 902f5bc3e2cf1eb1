import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from lacoding import load_fixture
from lacoding.region import RateRegion, collect_tuples, convex_hull, region_of, sum_rate_check
from lacoding.topology import Topology
from conftest import LOG3


def lp_dominated(p, generators) -> bool:
    """Is p <= some convex combination of generators (p >= 0)? Independent LP oracle."""
    g = np.asarray(generators, dtype=float)
    n, d = g.shape
    # variables lambda_1..n; constraints -G^T lambda <= -p, sum lambda = 1
    res = linprog(
        np.zeros(n), A_ub=-g.T, b_ub=-np.asarray(p, dtype=float) + 1e-9,
        A_eq=np.ones((1, n)), b_eq=[1.0], bounds=[(0, None)] * n, method="highs",
    )
    return res.status == 0


def lp_is_vertex(v, points) -> bool:
    """v is extreme when it is not a convex combination of the other down-closure points."""
    d = len(v)
    cloud = set()
    for p in list(points) + [(0.0,) * d]:
        for mask in itertools.product((0, 1), repeat=d):
            cloud.add(tuple(x if keep else 0.0 for x, keep in zip(p, mask)))
    others = [q for q in cloud if not np.allclose(q, v, atol=1e-9)]
    if not others:
        return True
    g = np.asarray(others, dtype=float)
    res = linprog(
        np.zeros(len(others)), A_eq=np.vstack([g.T, np.ones(len(others))]),
        b_eq=np.append(np.asarray(v, dtype=float), 1.0), bounds=[(0, None)] * len(others), method="highs",
    )
    return res.status != 0


def test_time_sharing_triangle():
    reg = convex_hull([(1, 0), (0, 1), (0.5, 0.5)])
    assert set(reg.vertices) == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}
    assert reg.contains((0.5, 0.5))


def test_single_point_box():
    reg = convex_hull([(1.0, 2.0)])
    assert set(reg.vertices) == {(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (1.0, 2.0)}


def test_single_link():
    reg = region_of(Topology.from_coverage([(0,)]))
    assert reg.vertices == ((0.0,), (1.0,))


def test_two_tx_region(two_tx):
    reg = region_of(two_tx)
    assert len(reg.vertices) == 4
    for v in [(0, 0), (1, 0), (1, 1), (0, LOG3)]:
        assert reg.has_vertex(v)
    assert reg.contains((0.5, (1 + LOG3) / 2))
    assert not reg.contains((0.5, (1 + LOG3) / 2 + 1e-6))


def test_degenerate_inputs():
    assert convex_hull([], dimension=2).vertices == ((0.0, 0.0),)
    reg = convex_hull([(0.0, 3.0)])
    assert reg.vertices == ((0.0, 0.0), (0.0, 3.0))
    assert reg.contains((0.0, 1.0)) and not reg.contains((0.1, 1.0))


def test_dimension_bound():
    with pytest.raises(ValueError):
        convex_hull([(1, 1, 1, 1, 1)])
    with pytest.raises(ValueError):
        convex_hull([(1, -1)])
    with pytest.raises(ValueError):
        convex_hull([(1, math.inf)])


def test_sum_rate_check():
    ok, witness = sum_rate_check(RateRegion(2, ((0.0, 0.0), (2.0, 2.0)), ("origin", "x")), 3)
    assert not ok and witness == (2.0, 2.0)
    assert sum_rate_check(convex_hull([], dimension=3), 0) == (True, None)


def test_collect_tuples_two_tx(two_tx):
    rates = [tt.rates for tt in collect_tuples(two_tx)]
    for r in [(0.0, 0.0), (1.0, 0.0), (0.0, LOG3), (1.0, 1.0)]:
        assert r in rates


def test_jrc_tuples_carry_provenance(three_tx):
    tags = [tt.provenance for tt in collect_tuples(three_tx)]
    assert tags[:4] == ["origin", "src R1", "src R2", "erc"]
    assert any(tag.startswith("jrc t^1_12=1") for tag in tags)


# rates as they arise from schemes: log2 of small alphabet sizes, plus half-steps
rate = st.sampled_from(sorted({math.log2(c) for c in range(1, 9)} | {x / 2 for x in range(7)}))
points2 = st.lists(st.tuples(rate, rate), min_size=1, max_size=8)
points3 = st.lists(st.tuples(rate, rate, rate), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(st.one_of(points2, points3))
def test_hull_against_lp(points):
    reg = convex_hull(points)
    for v in reg.vertices:
        assert lp_is_vertex(v, points)
    for p in points:
        assert reg.contains(p, tol=1e-7)
    rng = np.random.default_rng(len(points))
    for q in rng.uniform(0, 3, size=(20, len(points[0]))):
        inside = lp_dominated(q, list(points) + [(0.0,) * len(q)])
        if reg.contains(q, tol=1e-7) != inside:
            # only tolerance-level disagreements are acceptable
            assert reg.contains(q, tol=1e-5) and lp_dominated(q - 1e-5, list(points) + [(0.0,) * len(q)])


@settings(max_examples=40, deadline=None)
@given(st.one_of(points2, points3))
def test_hull_idempotent(points):
    reg = convex_hull(points)
    again = convex_hull(list(reg.vertices))
    assert len(again.vertices) == len(reg.vertices)
    assert np.allclose(again.vertices, reg.vertices, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(points2, st.tuples(rate, rate))
def test_hull_monotone(points, extra):
    before = convex_hull(points)
    after = convex_hull(points + [extra])
    for v in before.vertices:
        assert after.contains(v, tol=1e-7)


def test_fixture_regions_respect_sum_bound():
    for name in ["two_tx", "three_tx", "three_rx_a", "three_rx_b", "three_rx_c", "three_rx_d", "single"]:
        t = load_fixture(name)
        assert sum_rate_check(region_of(t), t.num_transmitters)[0]
