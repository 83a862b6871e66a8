"""Finite metric spaces and distances between them.

Point clouds carry their metric with them: plain Euclidean, or Euclidean on a
flat torus with a period per axis.  Everything here is a pure function of its
inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput

EUCLIDEAN = "euclidean"
TOROIDAL = "toroidal"


@dataclass(frozen=True)
class PointCloud:
    """A finite sample of points with an attached metric.

    ``periods`` is required (one entry per axis) when ``metric_kind`` is
    ``"toroidal"`` and ignored otherwise.
    """

    points: np.ndarray
    metric_kind: str = EUCLIDEAN
    periods: tuple[float, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise InvalidInput("points must be a 2D array of shape (n, d)")
        if pts.shape[0] > 0 and pts.shape[1] < 1:
            raise InvalidInput("point dimension must be at least 1")
        object.__setattr__(self, "points", pts)
        if self.metric_kind == TOROIDAL:
            if self.periods is None or len(self.periods) != pts.shape[1]:
                raise InvalidInput("toroidal metric needs one period per axis")
            periods = tuple(float(p) for p in self.periods)
            if any(p <= 0 for p in periods):
                raise InvalidInput("periods must be positive")
            if pts.size and (np.any(pts < 0) or np.any(pts >= np.array(periods))):
                raise InvalidInput("toroidal coordinates must lie in [0, period)")
            object.__setattr__(self, "periods", periods)
        elif self.metric_kind == EUCLIDEAN:
            object.__setattr__(self, "periods", None)
        else:
            raise InvalidInput(f"unknown metric kind {self.metric_kind!r}")

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def same_space(self, other: "PointCloud") -> bool:
        return (
            self.dim == other.dim
            and self.metric_kind == other.metric_kind
            and self.periods == other.periods
        )


@dataclass(frozen=True)
class TimeVaryingPointCloud:
    """Point clouds sampled at strictly increasing times."""

    times: np.ndarray
    clouds: list[PointCloud] = field(default_factory=list)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        if len(times) < 1 or len(times) != len(self.clouds):
            raise InvalidInput("need one cloud per time stamp and at least one time")
        if np.any(np.diff(times) <= 0):
            raise InvalidInput("times must be strictly increasing")
        dims = {c.dim for c in self.clouds if len(c)}
        if len(dims) > 1:
            raise InvalidInput("all clouds must share one dimension")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "clouds", list(self.clouds))

    def __len__(self) -> int:
        return len(self.clouds)


def _pairwise_diff(a: np.ndarray, b: np.ndarray, periods) -> np.ndarray:
    diff = np.abs(a[:, None, :] - b[None, :, :])
    if periods is not None:
        p = np.asarray(periods)
        diff = np.minimum(diff, p - diff)
    return diff


def cross_distances(X: PointCloud, Y: PointCloud) -> np.ndarray:
    """|X| x |Y| matrix of distances between the points of two clouds."""
    if not X.same_space(Y):
        raise InvalidInput("clouds live in different spaces")
    diff = _pairwise_diff(X.points, Y.points, X.periods)
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def pairwise_distances(cloud: PointCloud) -> np.ndarray:
    """Symmetric distance matrix of a cloud under its own metric.

    On the torus each axis contributes the wrapped difference
    ``min(|d|, period - |d|)`` before the Euclidean norm is taken.
    """
    if len(cloud) == 0:
        raise InvalidInput("empty point cloud")
    dm = cross_distances(cloud, cloud)
    dm = 0.5 * (dm + dm.T)
    np.fill_diagonal(dm, 0.0)
    return dm


def hausdorff_distance(X: PointCloud, Y: PointCloud) -> float:
    """max of the two directed sup-inf distances between ``X`` and ``Y``."""
    if len(X) == 0 or len(Y) == 0:
        raise InvalidInput("Hausdorff distance needs non-empty clouds")
    d = cross_distances(X, Y)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def gh_upper_bound(X: PointCloud, Y: PointCloud) -> float:
    """Upper bound on the Gromov-Hausdorff distance of two embedded clouds.

    This is the Hausdorff distance in the common ambient space; the true
    Gromov-Hausdorff distance can be strictly smaller.
    """
    return hausdorff_distance(X, Y)


def quadrature_weights(times: Sequence[float]) -> np.ndarray:
    """Left-Riemann weights, the last spacing repeated; a single sample gets 1."""
    t = np.asarray(times, dtype=float).reshape(-1)
    if len(t) == 1:
        return np.ones(1)
    gaps = np.diff(t)
    return np.append(gaps, gaps[-1])


def time_aggregate(per_time_values: Sequence[float], times: Sequence[float], p: float = math.inf) -> float:
    """Collapse a series of per-time distances into one number.

    ``p = inf`` gives the supremum; finite ``p >= 1`` gives the L^p norm of the
    series under left-Riemann quadrature on the sample times.
    """
    v = np.asarray(per_time_values, dtype=float).reshape(-1)
    t = np.asarray(times, dtype=float).reshape(-1)
    if len(v) == 0:
        raise InvalidInput("no values to aggregate")
    if len(v) != len(t):
        raise InvalidInput("values and times differ in length")
    if not p >= 1:
        raise InvalidInput("p must lie in [1, inf]")
    if np.any(v < 0) or np.any(np.isnan(v)):
        raise InvalidInput("values must be non-negative")
    if math.isinf(p):
        return float(v.max())
    if np.any(np.isinf(v)):
        return math.inf
    w = quadrature_weights(t)
    return float(np.sum(w * v**p) ** (1.0 / p))
