"""Discrete-time Vicsek model on a periodic square.

Agents move at constant speed ``v0``; each step every agent adopts the mean
heading of all agents within radius ``R`` (itself included) plus uniform noise
of width ``eta``.  A frame is an ``(n, 3)`` array of ``x, y, theta`` rows, with
agent identity given by row index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInput
from .metric import EUCLIDEAN, TOROIDAL, PointCloud, TimeVaryingPointCloud

TWO_PI = 2.0 * math.pi
CIRCULAR_MEAN = "circular_mean"
ARITHMETIC_MEAN = "arithmetic_mean"


@dataclass(frozen=True)
class VicsekParams:
    n: int = 300
    box_length: float = 25.0
    speed: float = 0.03
    eta: float = 0.1
    radius: float = 1.0
    dt: float = 1.0
    steps: int = 2000
    seed: int = 0
    heading_rule: str = CIRCULAR_MEAN
    neighbor_search: str = "grid"

    def __post_init__(self):
        if self.n < 0 or self.steps < 0:
            raise InvalidInput("n and steps must be non-negative")
        if self.box_length <= 0 or self.speed <= 0 or self.radius <= 0 or self.dt <= 0:
            raise InvalidInput("box_length, speed, radius and dt must be positive")
        if self.eta < 0:
            raise InvalidInput("eta must be non-negative")
        if self.heading_rule not in (CIRCULAR_MEAN, ARITHMETIC_MEAN):
            raise InvalidInput(f"unknown heading rule {self.heading_rule!r}")
        if self.neighbor_search not in ("grid", "brute"):
            raise InvalidInput(f"unknown neighbor search {self.neighbor_search!r}")

    @property
    def density(self) -> float:
        return self.n / self.box_length**2

    def with_(self, **changes) -> "VicsekParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SimulationTrace:
    params: VicsekParams
    frames: np.ndarray  # (steps + 1, n, 3)

    @property
    def positions(self) -> np.ndarray:
        return self.frames[:, :, :2]

    @property
    def headings(self) -> np.ndarray:
        return self.frames[:, :, 2]

    def __len__(self) -> int:
        return self.frames.shape[0]


def _wrap(values: np.ndarray, period: float) -> np.ndarray:
    out = np.mod(values, period)
    # np.mod can round a tiny negative up to exactly `period`
    return np.where(out >= period, out - period, out)


def init_state(params: VicsekParams, rng: np.random.Generator) -> np.ndarray:
    """Uniform positions on the box and uniform headings on [0, 2pi)."""
    if params.n < 1:
        raise InvalidInput("need at least one agent")
    xy = rng.uniform(0.0, params.box_length, size=(params.n, 2))
    theta = rng.uniform(0.0, TWO_PI, size=params.n)
    frame = np.column_stack([_wrap(xy, params.box_length), _wrap(theta, TWO_PI)])
    return frame


def _torus_delta(a: np.ndarray, b: np.ndarray, length: float) -> np.ndarray:
    d = np.abs(a - b)
    return np.minimum(d, length - d)


def neighbor_pairs_brute(xy: np.ndarray, radius: float, length: float) -> tuple[np.ndarray, np.ndarray]:
    """All ordered pairs (i, j), self included, within ``radius`` on the torus."""
    d = _torus_delta(xy[:, None, :], xy[None, :, :], length)
    close = np.einsum("ijk,ijk->ij", d, d) <= radius * radius
    i, j = np.nonzero(close)
    return i, j


def neighbor_pairs_grid(xy: np.ndarray, radius: float, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Same pairs as :func:`neighbor_pairs_brute`, found with a periodic cell list.

    Falls back to brute force when fewer than three cells fit along an axis,
    because the 3x3 stencil would then visit a cell twice.
    """
    ncell = int(length // radius)
    if ncell < 3:
        return neighbor_pairs_brute(xy, radius, length)
    side = length / ncell
    cxy = np.minimum((xy // side).astype(np.int64), ncell - 1)
    cell = cxy[:, 0] * ncell + cxy[:, 1]
    order = np.argsort(cell, kind="stable")
    counts = np.bincount(cell, minlength=ncell * ncell)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])

    n = xy.shape[0]
    src, dst = [], []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            nb = ((cxy[:, 0] + ox) % ncell) * ncell + (cxy[:, 1] + oy) % ncell
            cnt = counts[nb]
            total = int(cnt.sum())
            if total == 0:
                continue
            agent = np.repeat(np.arange(n), cnt)
            offset = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            src.append(agent)
            dst.append(order[np.repeat(starts[nb], cnt) + offset])
    i = np.concatenate(src)
    j = np.concatenate(dst)
    d = _torus_delta(xy[i], xy[j], length)
    keep = np.einsum("ij,ij->i", d, d) <= radius * radius
    i, j = i[keep], j[keep]
    key = np.lexsort((j, i))
    return i[key], j[key]


def _neighbor_pairs(xy, params: VicsekParams):
    if params.neighbor_search == "brute":
        return neighbor_pairs_brute(xy, params.radius, params.box_length)
    return neighbor_pairs_grid(xy, params.radius, params.box_length)


def step(frame: np.ndarray, params: VicsekParams, rng: np.random.Generator) -> np.ndarray:
    """Advance one time step: align headings, add noise, move."""
    xy = frame[:, :2]
    theta = frame[:, 2]
    n = frame.shape[0]
    i, j = _neighbor_pairs(xy, params)
    if params.heading_rule == CIRCULAR_MEAN:
        s = np.bincount(i, weights=np.sin(theta[j]), minlength=n)
        c = np.bincount(i, weights=np.cos(theta[j]), minlength=n)
        mean = np.arctan2(s, c)
    else:
        total = np.bincount(i, weights=theta[j], minlength=n)
        mean = total / np.bincount(i, minlength=n)
    noise = rng.uniform(-params.eta / 2.0, params.eta / 2.0, size=n)
    new_theta = _wrap(mean + noise, TWO_PI)
    velocity = params.speed * np.column_stack([np.cos(new_theta), np.sin(new_theta)])
    new_xy = _wrap(xy + velocity * params.dt, params.box_length)
    return np.column_stack([new_xy, new_theta])


def simulate(params: VicsekParams) -> SimulationTrace:
    """Run ``params.steps`` updates from a seeded random start."""
    rng = np.random.default_rng(params.seed)
    frames = np.empty((params.steps + 1, params.n, 3))
    frames[0] = init_state(params, rng)
    for t in range(params.steps):
        frames[t + 1] = step(frames[t], params, rng)
    return SimulationTrace(params, frames)


def order_parameter(trace: SimulationTrace) -> np.ndarray:
    """Alignment order parameter, one value in [0, 1] per frame."""
    theta = trace.headings
    v0 = trace.params.speed
    vx = (v0 * np.cos(theta)).sum(axis=1)
    vy = (v0 * np.sin(theta)).sum(axis=1)
    phi = np.hypot(vx, vy) / (theta.shape[1] * v0)
    return np.clip(phi, 0.0, 1.0)


def to_point_clouds(trace: SimulationTrace, subsample_step: int = 10,
                    metric_kind: str = EUCLIDEAN) -> TimeVaryingPointCloud:
    """Scale every ``subsample_step``-th frame to the unit cube (x/l, y/l, theta/2pi)."""
    if subsample_step < 1:
        raise InvalidInput("subsample_step must be at least 1")
    length = trace.params.box_length
    idx = np.arange(0, len(trace), subsample_step)
    clouds = []
    for t in idx:
        f = trace.frames[t]
        pts = np.column_stack([f[:, 0] / length, f[:, 1] / length, f[:, 2] / TWO_PI])
        # guard against x/l rounding up to 1.0
        pts = np.minimum(pts, np.nextafter(1.0, 0.0))
        if metric_kind == TOROIDAL:
            clouds.append(PointCloud(pts, TOROIDAL, (1.0, 1.0, 1.0)))
        else:
            clouds.append(PointCloud(pts, metric_kind))
    times = idx * trace.params.dt
    return TimeVaryingPointCloud(times, clouds)
