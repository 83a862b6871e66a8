import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crocker.complex import Filtration, build_vr_filtration
from crocker.errors import InvalidInput
from crocker.metric import PointCloud, pairwise_distances
from crocker.persistence import Barcode, compute_ph, rank_between, rank_function, rank_grid
from oracles import betti_by_rank, reduction_barcode

FIG3 = Barcode.from_intervals([(1, 7), (2, 9), (3, 11), (5, 10), (5, 9)], dim=1)
SQUARE = pairwise_distances(PointCloud([[0, 0], [1, 0], [1, 1], [0, 1]]))


def random_dm(seed, n, d):
    pts = np.random.default_rng(seed).uniform(size=(n, d))
    return pairwise_distances(PointCloud(pts))


def as_triples(b):
    return sorted((i.dim, i.birth, i.death) for i in b.intervals)


class TestComputePH:
    def test_two_points(self):
        dm = np.array([[0, 1.0], [1.0, 0]])
        b = compute_ph(build_vr_filtration(dm, 2.0))
        assert as_triples(b) == [(0, 0.0, 1.0), (0, 0.0, math.inf)]

    def test_square_loop(self):
        b = compute_ph(build_vr_filtration(SQUARE, 1.5))
        births, deaths = b.diagram(1)
        np.testing.assert_allclose(np.column_stack([births, deaths]), [[1.0, math.sqrt(2)]])

    def test_equilateral_triangle_has_no_loop(self):
        dm = np.ones((3, 3)) - np.eye(3)
        b = compute_ph(build_vr_filtration(dm, 1.0))
        assert as_triples(b) == [(0, 0.0, 1.0), (0, 0.0, 1.0), (0, 0.0, math.inf)]

    def test_dims_filter(self):
        f = build_vr_filtration(SQUARE, 1.5)
        assert set(compute_ph(f, dims=[1]).dims.tolist()) == {1}
        assert set(compute_ph(f, dims=[0]).dims.tolist()) == {0}
        with pytest.raises(InvalidInput):
            compute_ph(f, dims=[2])

    def test_loop_open_at_max_scale(self):
        b = compute_ph(build_vr_filtration(SQUARE, 1.2))
        assert b.diagram(1)[1].tolist() == [math.inf]

    def test_face_after_coface_rejected(self):
        bad = Filtration.from_simplices([((0,), 0), ((1,), 0), ((2,), 0), ((0, 1), 1), ((1, 2), 1),
                                         ((0, 2), 5), ((0, 1, 2), 2)])
        with pytest.raises(InvalidInput):
            compute_ph(bad)

    def test_missing_face_rejected(self):
        bad = Filtration.from_simplices([((0,), 0), ((1,), 0), ((2,), 0), ((0, 1), 1), ((0, 1, 2), 2)])
        with pytest.raises(InvalidInput):
            compute_ph(bad)

    def test_edge_before_vertex_rejected(self):
        bad = Filtration.from_simplices([((0,), 2), ((1,), 0), ((0, 1), 1)])
        with pytest.raises(InvalidInput):
            compute_ph(bad)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(1, 3), st.floats(0.05, 1.8))
    def test_matches_column_reduction(self, seed, n, d, scale):
        dm = random_dm(seed, n, d)
        got = as_triples(compute_ph(build_vr_filtration(dm, scale)))
        assert got == reduction_barcode(dm, scale)

    def test_ties_match_reduction(self):
        # integer grid points give many equal distances
        pts = np.array([[x, y] for x in range(3) for y in range(3)], dtype=float)
        dm = pairwise_distances(PointCloud(pts))
        for scale in (1.0, 1.5, 2.0, 3.0):
            assert as_triples(compute_ph(build_vr_filtration(dm, scale))) == reduction_barcode(dm, scale)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_h0_invariants(self, seed, n):
        dm = random_dm(seed, n, 2)
        b = compute_ph(build_vr_filtration(dm, 10.0))
        births, deaths = b.diagram(0)
        assert np.all(births == 0)
        assert np.count_nonzero(np.isinf(deaths)) == 1
        assert 1 <= len(births) <= n
        assert np.all(b.deaths > b.births)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 8), st.integers(1, 3))
    def test_betti_sweep(self, seed, n, d):
        dm = random_dm(seed, n, d)
        scale = float(dm.max()) + 1
        b = compute_ph(build_vr_filtration(dm, scale))
        values = np.unique(dm[np.triu_indices(n, 1)])
        for eps in np.concatenate([values - 1e-6, values + 1e-6]):
            if eps < 0:
                continue
            expected = betti_by_rank(dm, eps)
            assert (rank_between(b, 0, eps, eps), rank_between(b, 1, eps, eps)) == expected


class TestRank:
    def test_worked_example(self):
        assert rank_between(FIG3, 1, 4, 8) == 2

    def test_point_containment(self):
        assert rank_between(FIG3, 1, 5, 5) == 5

    def test_empty(self):
        assert rank_between(Barcode.from_intervals([]), 0, 1, 2) == 0

    def test_order(self):
        with pytest.raises(InvalidInput):
            rank_between(FIG3, 1, 8, 4)

    def test_rank_function_boundary(self):
        b = Barcode.from_intervals([(0, 10)], dim=0)
        assert rank_function(b, 0, 5, 0) == 1
        assert rank_function(b, 0, 5, 5) == 1
        assert rank_function(b, 0, 5, 5.01) == 0
        with pytest.raises(InvalidInput):
            rank_function(b, 0, 5, -1)

    def test_short_bars_vanish(self):
        b = Barcode.from_intervals([(0, 0.05)], dim=0)
        assert rank_function(b, 0, 0.03, 0.03) == 0
        assert rank_function(b, 0, 0.025, 0.02) == 1

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 5), st.floats(0, 5)), max_size=8),
           st.lists(st.floats(-1, 11), min_size=1, max_size=6),
           st.lists(st.floats(0, 3), min_size=1, max_size=4))
    def test_grid_matches_pointwise(self, bars, eps, alphas):
        b = Barcode.from_intervals([(x, x + y) for x, y in bars], dim=0)
        g = rank_grid(b, 0, np.array(eps), np.array(alphas))
        for i, e in enumerate(eps):
            for j, a in enumerate(alphas):
                assert g[i, j] == rank_function(b, 0, e, a)


class TestBarcode:
    def test_validation(self):
        with pytest.raises(InvalidInput):
            Barcode.from_intervals([(0, 2.0, 1.0)])

    def test_clipped(self):
        b = Barcode.from_intervals([(0, 0.0, math.inf), (0, 0.0, 0.2)], max_scale=0.5)
        assert sorted(b.clipped().deaths.tolist()) == [0.2, 0.5]
        assert sorted(b.clipped(0.3).deaths.tolist()) == [0.2, 0.3]

    def test_equality_ignores_order(self):
        a = Barcode.from_intervals([(0, 0, 1), (1, 2, 3)])
        b = Barcode.from_intervals([(1, 2, 3), (0, 0, 1)])
        assert a == b
        assert a != Barcode.from_intervals([(0, 0, 1)])
