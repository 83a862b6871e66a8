import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from crocker.errors import InvalidInput
from crocker.metric import (PointCloud, TimeVaryingPointCloud, cross_distances, gh_upper_bound,
                            hausdorff_distance, pairwise_distances, quadrature_weights, time_aggregate)

coords = st.floats(0, 0.999, allow_nan=False)


class TestPointCloud:
    def test_rejects_unknown_metric(self):
        with pytest.raises(InvalidInput):
            PointCloud([[0.0]], "manhattan")

    def test_toroidal_needs_periods(self):
        with pytest.raises(InvalidInput):
            PointCloud([[0.5, 0.5]], "toroidal")
        with pytest.raises(InvalidInput):
            PointCloud([[0.5, 0.5]], "toroidal", (1.0,))

    def test_toroidal_coordinates_in_range(self):
        with pytest.raises(InvalidInput):
            PointCloud([[1.0]], "toroidal", (1.0,))

    def test_one_dimensional_input_is_column(self):
        c = PointCloud([0.0, 3.0])
        assert c.dim == 1 and len(c) == 2

    def test_time_varying_requires_increasing_times(self):
        c = PointCloud([[0.0]])
        with pytest.raises(InvalidInput):
            TimeVaryingPointCloud([1.0, 1.0], [c, c])
        with pytest.raises(InvalidInput):
            TimeVaryingPointCloud([0.0], [c, c])


class TestPairwiseDistances:
    def test_line(self):
        dm = pairwise_distances(PointCloud([0.0, 3.0]))
        np.testing.assert_array_equal(dm, [[0, 3], [3, 0]])

    def test_toroidal_wraps(self):
        dm = pairwise_distances(PointCloud([[0.05], [0.95]], "toroidal", (1.0,)))
        assert dm[0, 1] == pytest.approx(0.1)

    def test_toroidal_never_exceeds_euclidean(self, rng):
        pts = rng.uniform(0, 1, (30, 3))
        tor = pairwise_distances(PointCloud(pts, "toroidal", (1.0, 1.0, 1.0)))
        euc = pairwise_distances(PointCloud(pts))
        assert np.all(tor <= euc + 1e-15)
        assert tor.max() <= math.sqrt(3) / 2 + 1e-12

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, (6, 2), elements=coords), st.booleans())
    def test_metric_axioms(self, pts, toroidal):
        cloud = PointCloud(pts, "toroidal", (1.0, 1.0)) if toroidal else PointCloud(pts)
        dm = pairwise_distances(cloud)
        assert np.all(np.diag(dm) == 0)
        np.testing.assert_array_equal(dm, dm.T)
        # triangle inequality d(i,k) <= d(i,j) + d(j,k)
        lhs = dm[:, None, :]
        rhs = dm[:, :, None] + dm[None, :, :]
        assert np.all(lhs <= rhs + 1e-12)


class TestHausdorff:
    def test_known_value(self):
        X = PointCloud([[0.0], [1.0]])
        Y = PointCloud([[0.0], [3.0]])
        assert hausdorff_distance(X, Y) == pytest.approx(2.0)

    def test_identical_is_zero(self, rng):
        X = PointCloud(rng.uniform(size=(10, 2)))
        assert hausdorff_distance(X, X) == 0.0

    def test_requires_same_space(self):
        with pytest.raises(InvalidInput):
            hausdorff_distance(PointCloud([[0.0]]), PointCloud([[0.0, 0.0]]))

    def test_gh_bound_is_hausdorff_bound(self, rng):
        X = PointCloud(rng.uniform(size=(8, 2)))
        Y = PointCloud(rng.uniform(size=(5, 2)))
        assert gh_upper_bound(X, Y) <= hausdorff_distance(X, Y) + 1e-15

    def test_cross_distances_shape(self, rng):
        X = PointCloud(rng.uniform(size=(4, 3)))
        Y = PointCloud(rng.uniform(size=(7, 3)))
        d = cross_distances(X, Y)
        assert d.shape == (4, 7)
        np.testing.assert_allclose(d[1, 2], np.linalg.norm(X.points[1] - Y.points[2]))


class TestTimeAggregate:
    def test_sup(self):
        assert time_aggregate([1.0, 3.0, 2.0], [0, 1, 2]) == 3.0

    def test_single_sample(self):
        assert time_aggregate([2.0], [5.0], p=2) == pytest.approx(2.0)

    def test_lp_constant_series(self):
        # constant c on a unit-spaced grid of length m: (m c^p)^(1/p)
        assert time_aggregate([2.0] * 4, [0, 1, 2, 3], p=2) == pytest.approx(math.sqrt(4 * 4.0))

    def test_weights(self):
        np.testing.assert_array_equal(quadrature_weights([0, 1, 3]), [1, 2, 2])

    def test_errors(self):
        with pytest.raises(InvalidInput):
            time_aggregate([1.0], [0.0], p=0.5)
        with pytest.raises(InvalidInput):
            time_aggregate([1.0, 2.0], [0.0], p=2)
        with pytest.raises(InvalidInput):
            time_aggregate([], [], p=2)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0, 100), min_size=1, max_size=10))
    def test_lp_monotone_in_values(self, values):
        t = np.arange(len(values), dtype=float)
        v = np.array(values)
        assert time_aggregate(v, t, 2) <= time_aggregate(v + 1.0, t, 2) + 1e-9
