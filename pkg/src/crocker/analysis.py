"""PCA, Euclidean distance matrices, K-medoids (PAM) and accuracy scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class ClusterResult:
    medoid_indices: np.ndarray  # ascending
    assignment: np.ndarray  # cluster id = position in medoid_indices
    cost: float

    @property
    def K(self) -> int:
        return len(self.medoid_indices)


@dataclass(frozen=True)
class Accuracy:
    accuracy: float
    row_labels: list
    column_labels: list
    confusion: np.ndarray


def pca_reduce(features: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Project centered rows onto the top ``k`` principal directions.

    Each direction's sign is fixed so its largest-magnitude component is
    positive.  Returns the ``(N, k)`` scores and the explained-variance ratios.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise InvalidInput("features must be a non-empty 2D array")
    if k < 1 or k > min(X.shape):
        raise InvalidInput(f"k must lie in [1, {min(X.shape)}]")
    Xc = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(Xc, full_matrices=False)
    directions = vt[:k]
    big = np.argmax(np.abs(directions), axis=1)
    signs = np.sign(directions[np.arange(k), big])
    signs[signs == 0] = 1.0
    directions = directions * signs[:, None]
    total = float(np.sum(s**2))
    ratios = s[:k] ** 2 / total if total > 0 else np.zeros(k)
    return Xc @ directions.T, ratios


def euclidean_distance_matrix(features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=float)
    sq = np.sum(X * X, axis=1)
    g = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    dm = np.sqrt(np.maximum(g, 0.0))
    # the Gram trick loses precision for nearby rows; recompute exactly where it matters
    close = dm < 1e-6 * max(1.0, float(np.sqrt(sq.max(initial=0.0))))
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        dm[i, j] = dm[j, i] = float(np.linalg.norm(X[i] - X[j]))
    dm = 0.5 * (dm + dm.T)
    np.fill_diagonal(dm, 0.0)
    return dm


def assign(dm: np.ndarray, medoids: np.ndarray) -> np.ndarray:
    """Nearest medoid per point; ties go to the lowest medoid index."""
    medoids = np.sort(np.asarray(medoids))
    return np.argmin(dm[:, medoids], axis=1)


def total_cost(dm: np.ndarray, medoids) -> float:
    return float(dm[:, np.asarray(medoids)].min(axis=1).sum())


def _build(dm: np.ndarray, K: int) -> list[int]:
    medoids = [int(np.argmin(dm.sum(axis=1)))]
    nearest = dm[:, medoids[0]].copy()
    for _ in range(1, K):
        gain = np.maximum(nearest[None, :] - dm, 0.0).sum(axis=1)
        gain[medoids] = -np.inf
        c = int(np.argmax(gain))
        medoids.append(c)
        nearest = np.minimum(nearest, dm[:, c])
    return sorted(medoids)


def k_medoids_pam(dm: np.ndarray, K: int, seed: int | None = None, max_iter: int = 1000) -> ClusterResult:
    """Partitioning Around Medoids: greedy BUILD then best-improvement SWAP.

    Deterministic; ``seed`` is accepted for interface stability and unused.
    """
    dm = np.asarray(dm, dtype=float)
    N = dm.shape[0]
    if dm.ndim != 2 or dm.shape[1] != N:
        raise InvalidInput("distance matrix must be square")
    if K < 1 or K > N:
        raise InvalidInput(f"K must lie in [1, {N}]")
    if not np.all(np.isfinite(dm)):
        raise InvalidInput("distance matrix must be finite")

    medoids = _build(dm, K)
    cost = total_cost(dm, medoids)
    tol = 1e-12 * max(1.0, cost)
    for _ in range(max_iter):
        d_med = dm[:, medoids]
        order = np.argsort(d_med, axis=1, kind="stable")
        nearest = d_med[np.arange(N), order[:, 0]]
        second = d_med[np.arange(N), order[:, 1]] if K > 1 else np.full(N, np.inf)
        candidates = np.setdiff1d(np.arange(N), medoids)
        if len(candidates) == 0:
            break
        best = (cost - tol, None, None)
        for slot in range(K):
            base = np.where(order[:, 0] == slot, second, nearest)
            swapped = np.minimum(dm[candidates], base[None, :]).sum(axis=1)
            h = int(np.argmin(swapped))
            if swapped[h] < best[0]:
                best = (float(swapped[h]), slot, int(candidates[h]))
        if best[1] is None:
            break
        medoids[best[1]] = best[2]
        medoids.sort()
        cost = total_cost(dm, medoids)
    medoids = np.array(medoids, dtype=np.int64)
    return ClusterResult(medoids, assign(dm, medoids), cost)


def clustering_accuracy(result: ClusterResult, labels) -> Accuracy:
    """Score clusters by the label of their medoid.

    Clusters whose medoids share a label are scored together; rows of the
    confusion matrix are true labels, columns are distinct medoid labels.
    """
    labels = np.asarray(labels)
    if len(labels) != len(result.assignment):
        raise InvalidInput("one label per clustered item required")
    medoid_labels = labels[result.medoid_indices]
    predicted = medoid_labels[result.assignment]
    accuracy = float(np.mean(predicted == labels)) if len(labels) else 0.0
    rows = sorted(set(labels.tolist()))
    cols = sorted(set(medoid_labels.tolist()))
    confusion = np.zeros((len(rows), len(cols)), dtype=np.int64)
    r_index = {v: k for k, v in enumerate(rows)}
    c_index = {v: k for k, v in enumerate(cols)}
    for truth, pred in zip(labels.tolist(), predicted.tolist()):
        confusion[r_index[truth], c_index[pred]] += 1
    return Accuracy(accuracy, rows, cols, confusion)
