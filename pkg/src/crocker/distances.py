"""Bottleneck and erosion distances between persistence diagrams.

Diagrams can be given as a :class:`~crocker.persistence.Barcode` plus a
dimension, or directly as an ``(n, 2)`` array of (birth, death) rows.
Infinite deaths are allowed; such points only ever match each other.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InvalidInput
from .metric import time_aggregate
from .persistence import Barcode
from .summaries import as_series


def as_diagram(d, dim: int | None = None) -> np.ndarray:
    if isinstance(d, Barcode):
        if dim is None:
            raise InvalidInput("dimension required for a Barcode")
        births, deaths = d.diagram(dim)
        return np.column_stack([births, deaths])
    arr = np.asarray(d, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 2))
    arr = arr.reshape(-1, 2)
    if np.any(arr[:, 1] < arr[:, 0]):
        raise InvalidInput("diagram points need birth <= death")
    return arr


def _split(diagram: np.ndarray):
    inf = np.isinf(diagram[:, 1])
    return diagram[~inf], np.sort(diagram[inf, 0])


def _perfect_matching(adj: np.ndarray) -> bool:
    match = maximum_bipartite_matching(csr_matrix(adj), perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(p: np.ndarray, q: np.ndarray) -> float:
    n1, n2 = len(p), len(q)
    if n1 == 0 and n2 == 0:
        return 0.0
    half_p = (p[:, 1] - p[:, 0]) / 2.0
    half_q = (q[:, 1] - q[:, 0]) / 2.0
    cost = np.maximum(np.abs(p[:, None, 0] - q[None, :, 0]), np.abs(p[:, None, 1] - q[None, :, 1]))

    # everything to the diagonal is always possible; every point must pay at
    # least its cheapest option
    upper = max(half_p.max(initial=0.0), half_q.max(initial=0.0))
    lower = 0.0
    if n1:
        lower = max(lower, np.minimum(half_p, cost.min(axis=1, initial=np.inf)).max())
    if n2:
        lower = max(lower, np.minimum(half_q, cost.min(axis=0, initial=np.inf)).max())
    cands = np.unique(np.concatenate([cost.ravel(), half_p, half_q]))
    cands = cands[(cands >= lower) & (cands <= upper)]

    size = n1 + n2
    adj = np.zeros((size, size), dtype=bool)
    adj[n1:, n2:] = True
    rows_p = np.arange(n1)
    rows_q = np.arange(n2)

    def feasible(r: float) -> bool:
        adj[:n1, :n2] = cost <= r
        adj[rows_p, n2 + rows_p] = half_p <= r
        adj[n1 + rows_q, rows_q] = half_q <= r
        return _perfect_matching(adj)

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck_distance(D1, D2, dim: int | None = None) -> float:
    """min over matchings (diagonal allowed) of the largest L-infinity move."""
    p_fin, p_inf = _split(as_diagram(D1, dim))
    q_fin, q_inf = _split(as_diagram(D2, dim))
    if len(p_inf) != len(q_inf):
        return math.inf
    essential = float(np.abs(p_inf - q_inf).max(initial=0.0))
    return max(essential, _finite_bottleneck(p_fin, q_fin))


def _dominated(p: np.ndarray, q: np.ndarray, delta: float, tol: float) -> bool:
    """g_P(eps, alpha + delta) <= g_Q(eps, alpha) everywhere?

    Checked at the critical windows [s, t] with s = birth + delta and
    t = death - delta over bars of ``p``; elsewhere the left side is either
    zero or equal to its value at a critical window while the right side can
    only be larger.
    """
    if len(p) == 0:
        return True
    s = np.unique(p[:, 0] + delta)
    t = np.unique(p[:, 1] - delta)
    S, T = np.meshgrid(s, t, indexing="ij")
    window = S <= T
    lhs = np.count_nonzero(((p[:, 0] + delta)[:, None, None] <= S) & ((p[:, 1] - delta)[:, None, None] >= T), axis=0)
    if len(q):
        rhs = np.count_nonzero((q[:, 0][:, None, None] <= S + tol) & (q[:, 1][:, None, None] >= T - tol), axis=0)
    else:
        rhs = np.zeros_like(lhs)
    return bool(np.all(lhs[window] <= rhs[window]))


def erosion_candidates(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Every delta at which the erosion inequalities can change truth value."""
    ends = np.concatenate([p.ravel(), q.ravel()])
    ends = np.unique(ends[np.isfinite(ends)])
    diffs = np.abs(ends[:, None] - ends[None, :]).ravel()
    return np.unique(np.concatenate([[0.0], diffs, diffs / 2.0]))


def erosion_distance(D1, D2, dim: int | None = None) -> float:
    """Infimum of the deltas with each rank function, eroded by delta, below the other.

    With closed containment the feasible set can be open at its lower end
    (``{}`` against ``{[3, 6]}`` is feasible exactly for delta > 1.5), so each
    candidate is also probed midway to the next one.
    """
    p = as_diagram(D1, dim)
    q = as_diagram(D2, dim)
    if np.count_nonzero(np.isinf(p[:, 1])) != np.count_nonzero(np.isinf(q[:, 1])):
        return math.inf
    if len(p) == 0 and len(q) == 0:
        return 0.0
    cands = erosion_candidates(p, q)
    finite = np.concatenate([p.ravel(), q.ravel()])
    finite = finite[np.isfinite(finite)]
    # absorbs rounding in birth + (b' - b) versus b'
    tol = 1e-12 * max(1.0, float(np.abs(finite).max(initial=0.0)))
    above = np.append((cands[:-1] + cands[1:]) / 2.0, cands[-1] + 1.0)

    def feasible(delta):
        return _dominated(p, q, delta, tol) and _dominated(q, p, delta, tol)

    # feasibility is constant between consecutive candidates and monotone in delta
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]) or feasible(above[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def _per_time(X, Y, dim: int, distance) -> tuple[np.ndarray, np.ndarray]:
    xs, ys = as_series(X), as_series(Y)
    if len(xs) != len(ys) or not np.array_equal(xs.times, ys.times):
        raise InvalidInput("time grids differ")
    values = np.array([distance(a, b, dim) for a, b in zip(xs, ys)])
    return values, xs.times


def per_time_bottleneck(X, Y, dim: int) -> np.ndarray:
    return _per_time(X, Y, dim, bottleneck_distance)[0]


def sup_bottleneck(X, Y, dim: int) -> float:
    """Largest per-time bottleneck distance between two stacked diagram series."""
    values, _ = _per_time(X, Y, dim, bottleneck_distance)
    return float(values.max())


def p_bottleneck(X, Y, dim: int, p: float = math.inf) -> float:
    """L^p norm over time of per-time bottleneck distances."""
    values, times = _per_time(X, Y, dim, bottleneck_distance)
    return time_aggregate(values, times, p)
