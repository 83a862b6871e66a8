"""Persistence barcodes of filtrations and the rank invariant.

Rank queries use closed containment: a bar ``[b, d]`` contributes to
``rank(V(i) -> V(j))`` when ``b <= i`` and ``d >= j``.  That convention is
isolated in :func:`rank_between` and :func:`rank_grid`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .complex import Filtration
from .errors import InvalidInput


class PersistenceInterval(NamedTuple):
    dim: int
    birth: float
    death: float


@dataclass(frozen=True)
class Barcode:
    """Intervals of several homology dimensions plus the computed scale range."""

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray
    max_scale: float = math.inf

    def __post_init__(self):
        dims = np.asarray(self.dims, dtype=np.int64).reshape(-1)
        births = np.asarray(self.births, dtype=float).reshape(-1)
        deaths = np.asarray(self.deaths, dtype=float).reshape(-1)
        if not (len(dims) == len(births) == len(deaths)):
            raise InvalidInput("dims, births and deaths differ in length")
        if np.any(deaths < births):
            raise InvalidInput("every interval needs birth <= death")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "births", births)
        object.__setattr__(self, "deaths", deaths)
        object.__setattr__(self, "max_scale", float(self.max_scale))

    @classmethod
    def from_intervals(cls, intervals: Iterable, max_scale: float = math.inf, dim: int | None = None) -> "Barcode":
        """From ``(dim, birth, death)`` triples, or ``(birth, death)`` pairs with ``dim`` given."""
        rows = []
        for it in intervals:
            if dim is not None and len(it) == 2:
                rows.append((dim, it[0], it[1]))
            else:
                rows.append(tuple(it))
        if not rows:
            return cls(np.zeros(0, np.int64), np.zeros(0), np.zeros(0), max_scale)
        d, b, e = zip(*rows)
        return cls(np.array(d), np.array(b, float), np.array(e, float), max_scale)

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def intervals(self) -> list[PersistenceInterval]:
        return [PersistenceInterval(int(k), float(b), float(d))
                for k, b, d in zip(self.dims, self.births, self.deaths)]

    def diagram(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """(births, deaths) arrays of one homology dimension."""
        mask = self.dims == dim
        return self.births[mask], self.deaths[mask]

    def sorted(self) -> "Barcode":
        order = np.lexsort((self.deaths, self.births, self.dims))
        return Barcode(self.dims[order], self.births[order], self.deaths[order], self.max_scale)

    def clipped(self, cap: float | None = None) -> "Barcode":
        """Copy with infinite deaths replaced by ``cap`` (default ``max_scale``)."""
        cap = self.max_scale if cap is None else float(cap)
        deaths = np.where(np.isinf(self.deaths), cap, self.deaths)
        return Barcode(self.dims, self.births, np.maximum(deaths, self.births), self.max_scale)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        a, b = self.sorted(), other.sorted()
        return (a.max_scale == b.max_scale or (math.isnan(a.max_scale) and math.isnan(b.max_scale))) \
            and np.array_equal(a.dims, b.dims) and np.array_equal(a.births, b.births) \
            and np.array_equal(a.deaths, b.deaths)


def _edge_lookup(n: int, edges: np.ndarray) -> np.ndarray:
    lookup = np.full((n, n), -1, dtype=np.int64)
    idx = np.arange(len(edges))
    lookup[edges[:, 0], edges[:, 1]] = idx
    lookup[edges[:, 1], edges[:, 0]] = idx
    return lookup


def _validate(f: Filtration, lookup: np.ndarray | None) -> None:
    n = f.n_vertices
    if len(f.edges):
        if f.edges.min() < 0 or f.edges.max() >= n:
            raise InvalidInput("edge refers to a missing vertex")
        if np.any(f.vertex_values[f.edges].max(axis=1) > f.edge_values):
            raise InvalidInput("edge enters before one of its vertices")
        if np.any(np.diff(f.edge_values) < 0):
            raise InvalidInput("edges are not in filtration order")
    if len(f.triangles):
        if f.triangles.min() < 0 or f.triangles.max() >= n:
            raise InvalidInput("triangle refers to a missing vertex")
        t = f.triangles
        faces = np.stack([lookup[t[:, 0], t[:, 1]], lookup[t[:, 0], t[:, 2]], lookup[t[:, 1], t[:, 2]]], axis=1)
        if np.any(faces < 0):
            raise InvalidInput("triangle is missing one of its edges")
        if np.any(f.edge_values[faces].max(axis=1) > f.triangle_values):
            raise InvalidInput("triangle enters before one of its edges")
        if np.any(np.diff(f.triangle_values) < 0):
            raise InvalidInput("triangles are not in filtration order")


def _zero_dim_pairs(f: Filtration):
    """Elder-rule union-find: returns (intervals, indices of merging edges)."""
    n = f.n_vertices
    parent = list(range(n))
    # elder = smaller (birth, vertex id)
    key = list(zip(f.vertex_values.tolist(), range(n)))
    births, deaths, merging = [], [], []

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for k, ((u, v), value) in enumerate(zip(f.edges.tolist(), f.edge_values.tolist())):
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        elder, younger = (ru, rv) if key[ru] < key[rv] else (rv, ru)
        parent[younger] = elder
        births.append(key[younger][0])
        deaths.append(value)
        merging.append(k)
    for r in range(n):
        if find(r) == r:
            births.append(key[r][0])
            deaths.append(math.inf)
    return births, deaths, merging


def _bits(indices: np.ndarray, nbits: int) -> int:
    mask = np.zeros(nbits, dtype=bool)
    mask[indices] = True
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _one_dim_pairs(f: Filtration, lookup: np.ndarray, cleared: set[int]):
    """Dimension-1 intervals by reducing edge coboundaries over GF(2).

    Columns are edges in reverse filtration order; the pivot of a column is
    its earliest triangle.  Edges that merge components in dimension 0 are
    skipped (clearing); they would reduce to zero anyway.
    """
    m, nt = len(f.edges), len(f.triangles)
    births, deaths = [], []
    if m == 0:
        return births, deaths
    if nt:
        t = f.triangles
        faces = np.stack([lookup[t[:, 0], t[:, 1]], lookup[t[:, 0], t[:, 2]], lookup[t[:, 1], t[:, 2]]], axis=1)
        flat_edges = faces.reshape(-1)
        flat_tris = np.repeat(np.arange(nt), 3)
        order = np.argsort(flat_edges, kind="stable")
        cob_tris = flat_tris[order]
        splits = np.cumsum(np.bincount(flat_edges, minlength=m))[:-1]
        coboundary = np.split(cob_tris, splits)
    else:
        coboundary = [np.zeros(0, dtype=np.int64)] * m

    edge_values = f.edge_values
    tri_values = f.triangle_values
    owner: dict[int, int] = {}
    stored: dict[int, object] = {}

    def column_bits(e):
        col = stored[e]
        if not isinstance(col, int):
            col = _bits(col, nt)
            stored[e] = col
        return col

    for e in range(m - 1, -1, -1):
        if e in cleared:
            continue
        tris = coboundary[e]
        if len(tris) == 0:
            births.append(edge_values[e])
            deaths.append(math.inf)
            continue
        low = int(tris[0])
        if low not in owner:
            owner[low] = e
            stored[e] = tris
            births.append(edge_values[e])
            deaths.append(tri_values[low])
            continue
        col = _bits(tris, nt)
        while col:
            low = (col & -col).bit_length() - 1
            other = owner.get(low)
            if other is None:
                break
            col ^= column_bits(other)
        if col:
            owner[low] = e
            stored[e] = col
            births.append(edge_values[e])
            deaths.append(tri_values[low])
        else:
            births.append(edge_values[e])
            deaths.append(math.inf)
    return births, deaths


def compute_ph(f: Filtration, dims: Iterable[int] | None = None) -> Barcode:
    """Barcode of a filtration in dimensions 0 and 1.

    ``dims`` restricts the output (dimension 1 needs dimension 0 internally
    for clearing, but its intervals are only reported when asked for).
    Zero-length intervals are dropped.
    """
    wanted = {0, 1} if dims is None else set(dims)
    if not wanted <= {0, 1}:
        raise InvalidInput("only dimensions 0 and 1 are supported")
    lookup = _edge_lookup(f.n_vertices, f.edges) if len(f.triangles) else None
    _validate(f, lookup)

    b0, d0, merging = _zero_dim_pairs(f)
    out_d, out_b, out_e = [], [], []
    if 0 in wanted:
        out_d += [0] * len(b0)
        out_b += b0
        out_e += d0
    if 1 in wanted and f.max_dim >= 1:
        if lookup is None:
            lookup = _edge_lookup(f.n_vertices, f.edges)
        b1, d1 = _one_dim_pairs(f, lookup, set(merging))
        out_d += [1] * len(b1)
        out_b += b1
        out_e += d1
    dims_a = np.array(out_d, dtype=np.int64)
    births = np.array(out_b, dtype=float)
    deaths = np.array(out_e, dtype=float)
    keep = deaths > births
    return Barcode(dims_a[keep], births[keep], deaths[keep], f.max_scale).sorted()


def rank_between(b: Barcode, dim: int, i: float, j: float) -> int:
    """Number of ``dim`` bars containing ``[i, j]`` (closed containment)."""
    if i > j:
        raise InvalidInput("need i <= j")
    births, deaths = b.diagram(dim)
    return int(np.count_nonzero((births <= i) & (deaths >= j)))


def rank_function(b: Barcode, dim: int, eps: float, alpha: float) -> int:
    """rank(V(eps - alpha) -> V(eps + alpha)); zero when no bar starts by eps - alpha."""
    if alpha < 0:
        raise InvalidInput("alpha must be non-negative")
    return rank_between(b, dim, eps - alpha, eps + alpha)


def rank_grid(b: Barcode, dim: int, eps: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """``rank_function`` over a grid, shape ``(len(eps), len(alphas))``."""
    births, deaths = b.diagram(dim)
    eps = np.asarray(eps, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas < 0):
        raise InvalidInput("alpha must be non-negative")
    lo = (eps[:, None] - alphas[None, :])[..., None]
    hi = (eps[:, None] + alphas[None, :])[..., None]
    return np.count_nonzero((births <= lo) & (deaths >= hi), axis=-1).astype(np.int64)
