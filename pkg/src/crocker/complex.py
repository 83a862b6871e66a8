"""Vietoris-Rips filtrations (up to triangles) and a brute-force Betti oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InvalidInput


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def _sorted_by_value(cells: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(values) == 0:
        return cells, values
    keys = [cells[:, k] for k in range(cells.shape[1] - 1, -1, -1)] + [values]
    order = np.lexsort(keys)
    return cells[order], values[order]


@dataclass(frozen=True)
class Filtration:
    """Simplices of dimension <= 2, stored per dimension.

    Within each dimension rows are sorted by (value, vertex tuple).  The global
    order is (value, dimension, vertex tuple), so a face precedes its coface
    exactly when its value is no larger.
    """

    vertex_values: np.ndarray
    edges: np.ndarray
    edge_values: np.ndarray
    triangles: np.ndarray
    triangle_values: np.ndarray
    max_scale: float = np.inf
    max_dim: int = 2

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_values)

    @property
    def simplices(self) -> list[Simplex]:
        """All simplices in global filtration order."""
        out = [Simplex((i,), float(v)) for i, v in enumerate(self.vertex_values)]
        out += [Simplex(tuple(int(x) for x in e), float(v)) for e, v in zip(self.edges, self.edge_values)]
        out += [Simplex(tuple(int(x) for x in t), float(v))
                for t, v in zip(self.triangles, self.triangle_values)]
        out.sort(key=lambda s: (s.value, s.dim, s.vertices))
        return out

    def counts(self) -> tuple[int, int, int]:
        return self.n_vertices, len(self.edges), len(self.triangles)

    @classmethod
    def from_simplices(cls, simplices: Iterable[Simplex | tuple], max_scale: float = np.inf) -> "Filtration":
        """Build from explicit ``(vertices, value)`` pairs.

        Vertex ids must be ``0..n-1``.  No face/coface check happens here;
        :func:`crocker.persistence.compute_ph` validates before reducing.
        """
        by_dim: dict[int, list] = {0: [], 1: [], 2: []}
        for s in simplices:
            verts, value = s
            verts = tuple(sorted(int(v) for v in verts))
            if len(verts) not in (1, 2, 3) or len(set(verts)) != len(verts):
                raise InvalidInput(f"bad simplex {verts}")
            by_dim[len(verts) - 1].append((verts, float(value)))
        ids = sorted(v[0][0] for v in by_dim[0])
        if ids != list(range(len(ids))):
            raise InvalidInput("vertex ids must be 0..n-1 with no repeats")
        vertex_values = np.zeros(len(ids))
        for (v,), val in by_dim[0]:
            vertex_values[v] = val

        def arrays(items, width):
            if not items:
                return np.zeros((0, width), dtype=np.int64), np.zeros(0)
            cells = np.array([c for c, _ in items], dtype=np.int64)
            vals = np.array([v for _, v in items], dtype=float)
            return _sorted_by_value(cells, vals)

        edges, ev = arrays(by_dim[1], 2)
        tris, tv = arrays(by_dim[2], 3)
        max_dim = 2 if len(tris) else (1 if len(edges) else 0)
        return cls(vertex_values, edges, ev, tris, tv, float(max_scale), max_dim)


def build_vr_filtration(dm: np.ndarray, max_scale: float, max_dim: int = 2) -> Filtration:
    """Vietoris-Rips filtration of a distance matrix truncated at ``max_scale``.

    Vertices enter at 0, edges at their length, triangles at their longest edge.
    """
    if max_dim not in (0, 1, 2):
        raise InvalidInput("max_dim must be 0, 1 or 2")
    if not max_scale >= 0:
        raise InvalidInput("max_scale must be non-negative")
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0]
    vertex_values = np.zeros(n)
    no_edges = np.zeros((0, 2), dtype=np.int64)
    no_tris = np.zeros((0, 3), dtype=np.int64)
    if max_dim == 0 or n < 2:
        return Filtration(vertex_values, no_edges, np.zeros(0), no_tris, np.zeros(0), float(max_scale), max_dim)

    adj = dm <= max_scale
    np.fill_diagonal(adj, False)
    iu, ju = np.nonzero(np.triu(adj, 1))
    edges, edge_values = _sorted_by_value(np.column_stack([iu, ju]).astype(np.int64), dm[iu, ju])

    triangles, triangle_values = no_tris, np.zeros(0)
    if max_dim == 2 and len(edges):
        # triangles (i, j, k), i < j < k: pairs of larger neighbours of i that are adjacent
        upper = np.triu(adj, 1)
        tri_parts = []
        for i in range(n - 2):
            js = np.flatnonzero(upper[i])
            if len(js) < 2:
                continue
            common = upper[js][:, js]
            a, b = np.nonzero(common)
            if len(a):
                tri_parts.append(np.column_stack([np.full(len(a), i), js[a], js[b]]))
        if tri_parts:
            tris = np.concatenate(tri_parts).astype(np.int64)
            vals = np.maximum(np.maximum(dm[tris[:, 0], tris[:, 1]], dm[tris[:, 0], tris[:, 2]]),
                              dm[tris[:, 1], tris[:, 2]])
            triangles, triangle_values = _sorted_by_value(tris, vals)
    return Filtration(vertex_values, edges, edge_values, triangles, triangle_values, float(max_scale), max_dim)


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over the two-element field by Gaussian elimination."""
    m = (np.asarray(matrix) % 2).astype(np.uint8).copy()
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        pivots = np.flatnonzero(m[rank:, c])
        if len(pivots) == 0:
            continue
        p = rank + pivots[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = np.flatnonzero(m[:, c])
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
    return rank


def betti_numbers_at(dm: np.ndarray, eps: float, max_dim: int = 2) -> tuple[int, int]:
    """(beta0, beta1) of the Rips complex at scale ``eps`` from boundary ranks.

    Deliberately naive: dense boundary matrices and Gaussian elimination over
    GF(2).  Meant as an independent check for small inputs only.  ``beta1`` is
    only meaningful when ``max_dim == 2``.
    """
    if not eps >= 0:
        raise InvalidInput("eps must be non-negative")
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if dm[i, j] <= eps]
    edge_index = {e: k for k, e in enumerate(edges)}
    tris = []
    if max_dim >= 2:
        tris = [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)
                if dm[i, j] <= eps and dm[i, k] <= eps and dm[j, k] <= eps]
    d1 = np.zeros((n, len(edges)), dtype=np.uint8)
    for k, (i, j) in enumerate(edges):
        d1[i, k] = d1[j, k] = 1
    d2 = np.zeros((len(edges), len(tris)), dtype=np.uint8)
    for k, (i, j, l) in enumerate(tris):
        for face in ((i, j), (i, l), (j, l)):
            d2[edge_index[face], k] = 1
    r1 = gf2_rank(d1) if edges else 0
    r2 = gf2_rank(d2) if tris else 0
    return n - r1, len(edges) - r1 - r2
