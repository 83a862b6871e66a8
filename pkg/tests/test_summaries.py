import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crocker.complex import build_vr_filtration
from crocker.errors import InvalidInput
from crocker.metric import PointCloud, pairwise_distances
from crocker.persistence import Barcode, compute_ph
from crocker.summaries import (CrockerPlot, ScaleGrid, TimeVaryingBarcode, alpha_smoothed_plot, concat_dims,
                               crocker_plot, crocker_stack, vectorize, vectorize_stack)


def bars(*pairs, dim=0, max_scale=math.inf):
    return Barcode.from_intervals(pairs, max_scale=max_scale, dim=dim)


def random_series(seed, times=4, n=8, scale=1.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(times):
        dm = pairwise_distances(PointCloud(rng.uniform(size=(n, 2))))
        out.append(compute_ph(build_vr_filtration(dm, scale)))
    return TimeVaryingBarcode(np.arange(times) * 10.0, out)


class TestScaleGrid:
    def test_preset(self):
        g = ScaleGrid.standard()
        assert len(g.epsilons) == 50 and g.epsilons[0] == 0 and g.epsilons[-1] == 0.35
        assert len(g.alphas) == 18 and g.alphas[-1] == 0.17
        assert g.required_scale == pytest.approx(0.52)

    @pytest.mark.parametrize("eps,alphas", [([0.2, 0.1], [0]), ([-1, 0], [0]), ([0, 1], [0.1]), ([0, 1], [0, 0])])
    def test_rejects(self, eps, alphas):
        with pytest.raises(InvalidInput):
            ScaleGrid(eps, alphas)


class TestCrockerPlot:
    def test_single_component(self):
        plot = crocker_plot([bars((0, math.inf))], ScaleGrid([0, 1, 5]), 0)
        np.testing.assert_array_equal(plot.values, [[1, 1, 1]])

    def test_eps_zero_counts_points(self):
        s = random_series(3, n=7)
        plot = crocker_plot(s, ScaleGrid([0.0, 0.5]), 0)
        assert np.all(plot.values[:, 0] == 7)

    def test_instability_example(self):
        delta = 0.1
        spaces = []
        for d in (1.0, 1 + delta):
            dm = np.full((4, 4), d)
            np.fill_diagonal(dm, 0)
            spaces.append(compute_ph(build_vr_filtration(dm, 2.0)))
        grid = ScaleGrid([1 + delta / 2])
        a = crocker_plot([spaces[0]], grid, 0).values[0, 0]
        b = crocker_plot([spaces[1]], grid, 0).values[0, 0]
        assert (a, b) == (1, 4)

    def test_eps_beyond_range(self):
        with pytest.raises(InvalidInput):
            crocker_plot([bars((0, 1), max_scale=0.5)], ScaleGrid([0, 0.6]), 0)

    def test_alpha_smoothing_examples(self):
        b = [bars((0, 0.05))]
        assert alpha_smoothed_plot(b, ScaleGrid([0.03]), 0, 0.03).values[0, 0] == 0
        assert alpha_smoothed_plot(b, ScaleGrid([0.025]), 0, 0.02).values[0, 0] == 1
        with pytest.raises(InvalidInput):
            alpha_smoothed_plot(b, ScaleGrid([0.0]), 0, -0.1)


class TestCrockerStack:
    def test_direct_count(self):
        alphas = np.arange(0, 8.0)
        stack = crocker_stack([bars((0, 10))], ScaleGrid([5.0], alphas), 0)
        np.testing.assert_array_equal(stack.values[0, 0], (alphas <= 5).astype(int))

    def test_truncated_cells(self):
        stack = crocker_stack([bars((0, 0.3), max_scale=0.4)], ScaleGrid([0.1, 0.3], [0, 0.05, 0.15]), 0)
        np.testing.assert_array_equal(stack.truncated, [[False, False, False], [False, False, True]])

    def test_slice_lookup(self):
        stack = crocker_stack([bars((0, 1))], ScaleGrid([0.5], [0, 0.1]), 0)
        assert stack.slice(0.1).alpha == 0.1
        with pytest.raises(InvalidInput):
            stack.slice(0.05)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1]))
    def test_monotone_and_slice_zero(self, seed, dim):
        s = random_series(seed, scale=0.8)
        grid = ScaleGrid(np.linspace(0, 0.5, 11), [0, 0.05, 0.1, 0.2, 0.3])
        stack = crocker_stack(s, grid, dim)
        assert np.all(np.diff(stack.values, axis=2) <= 0)
        np.testing.assert_array_equal(stack.slice(0).values, crocker_plot(s, grid, dim).values)
        for a in grid.alphas:
            np.testing.assert_array_equal(stack.slice(a).values, alpha_smoothed_plot(s, grid, dim, a).values)
        if dim == 0:
            assert np.all(np.diff(stack.values[:, :, 0], axis=1) <= 0)

    def test_h0_contours_shift_by_alpha(self):
        # all H0 births are 0, so for eps >= alpha the smoothed value at eps is the plain value at eps + alpha
        s = random_series(1, scale=1.0)
        step = 0.01
        grid = ScaleGrid(np.round(np.arange(0, 0.41, step), 12), np.round(np.arange(0, 0.06, step), 12))
        stack = crocker_stack(s, grid, 0)
        for k in range(1, len(grid.alphas)):
            np.testing.assert_array_equal(stack.values[:, k:len(grid.epsilons) - k, k],
                                          stack.values[:, 2 * k:, 0])
            assert np.all(stack.values[:, :k, k] == 0)


class TestVectorize:
    def test_row_major(self):
        plot = CrockerPlot(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.array([[1, 2], [3, 4]]), 0)
        np.testing.assert_array_equal(vectorize(plot), [1, 2, 3, 4])

    def test_full_scale_lengths(self):
        plot = CrockerPlot(np.arange(201.0), np.linspace(0, 0.35, 50), np.zeros((201, 50), int), 0)
        v = vectorize(plot)
        assert len(v) == 10050
        assert len(concat_dims(v, v)) == 20100
        assert len(vectorize_stack(CrockerPlot(np.arange(2.0), np.arange(3.0), np.zeros((2, 3)), 0).as_stack())) == 6

    def test_stack_order(self):
        s = random_series(5)
        stack = crocker_stack(s, ScaleGrid([0, 0.2, 0.4], [0, 0.1, 0.2]), 0)
        expected = np.concatenate([vectorize(stack.slice(a)) for a in stack.alphas])
        np.testing.assert_array_equal(vectorize_stack(stack), expected)

    def test_concat(self):
        np.testing.assert_array_equal(concat_dims([1], [2]), [1, 2])
        np.testing.assert_array_equal(concat_dims([], [3, 4]), [3, 4])
