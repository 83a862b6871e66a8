"""Crocker plots, alpha-smoothed crocker plots and crocker stacks.

Everything is evaluated on a finite (time, eps, alpha) grid.  A stack cell
with ``eps + alpha`` beyond the barcode's computed range is still evaluated,
but flagged in :attr:`CrockerStack.truncated` because deaths past
``max_scale`` were recorded as infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput
from .persistence import Barcode, rank_grid


@dataclass(frozen=True)
class TimeVaryingBarcode:
    """One barcode per sample time."""

    times: np.ndarray
    barcodes: list[Barcode] = field(default_factory=list)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        if len(times) != len(self.barcodes) or len(times) == 0:
            raise InvalidInput("need one barcode per time and at least one time")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "barcodes", list(self.barcodes))

    def __len__(self) -> int:
        return len(self.barcodes)

    def __iter__(self):
        return iter(self.barcodes)

    def __getitem__(self, k):
        return self.barcodes[k]


def as_series(barcodes) -> TimeVaryingBarcode:
    if isinstance(barcodes, TimeVaryingBarcode):
        return barcodes
    barcodes = list(barcodes)
    return TimeVaryingBarcode(np.arange(len(barcodes), dtype=float), barcodes)


@dataclass(frozen=True)
class ScaleGrid:
    epsilons: np.ndarray
    alphas: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float).reshape(-1)
        alphas = np.asarray(self.alphas, dtype=float).reshape(-1)
        if len(eps) == 0 or np.any(eps < 0) or np.any(np.diff(eps) <= 0):
            raise InvalidInput("epsilons must be non-negative and strictly increasing")
        if len(alphas) == 0 or alphas[0] != 0 or np.any(np.diff(alphas) <= 0):
            raise InvalidInput("alphas must start at 0 and strictly increase")
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def uniform(cls, eps_count: int = 50, eps_max: float = 0.35,
                alpha_count: int = 18, alpha_step: float = 0.01) -> "ScaleGrid":
        # alpha values rounded so that 0.01 * 3 prints as 0.03
        alphas = np.round(np.arange(alpha_count) * alpha_step, 12)
        return cls(np.linspace(0.0, eps_max, eps_count), alphas)

    @classmethod
    def standard(cls) -> "ScaleGrid":
        """50 eps values on [0, 0.35] and alpha = 0, 0.01, ..., 0.17."""
        return cls.uniform(50, 0.35, 18, 0.01)

    @property
    def required_scale(self) -> float:
        """Filtration range needed for every cell to be exact."""
        return float(self.epsilons[-1] + self.alphas[-1])


@dataclass(frozen=True)
class CrockerStack:
    """Integer grid indexed (time, eps, alpha) for one homology dimension."""

    times: np.ndarray
    epsilons: np.ndarray
    alphas: np.ndarray
    values: np.ndarray
    dim: int
    max_scale: float = np.inf

    @property
    def truncated(self) -> np.ndarray:
        """(eps, alpha) cells whose window reaches past the computed scale."""
        return (self.epsilons[:, None] + self.alphas[None, :]) > self.max_scale

    def alpha_index(self, alpha: float) -> int:
        hit = np.flatnonzero(np.isclose(self.alphas, alpha, rtol=0, atol=1e-12))
        if len(hit) == 0:
            raise InvalidInput(f"alpha {alpha} is not on the stack's grid")
        return int(hit[0])

    def slice(self, alpha: float) -> "CrockerPlot":
        k = self.alpha_index(alpha)
        return CrockerPlot(self.times, self.epsilons, self.values[:, :, k].copy(), self.dim,
                           float(self.alphas[k]), self.max_scale)


@dataclass(frozen=True)
class CrockerPlot:
    """Integer grid indexed (time, eps) at one smoothing level ``alpha``."""

    times: np.ndarray
    epsilons: np.ndarray
    values: np.ndarray
    dim: int
    alpha: float = 0.0
    max_scale: float = np.inf

    def as_stack(self) -> CrockerStack:
        return CrockerStack(self.times, self.epsilons, np.array([self.alpha]),
                            self.values[:, :, None], self.dim, self.max_scale)


def _check_range(series: TimeVaryingBarcode, epsilons: np.ndarray) -> float:
    scales = [b.max_scale for b in series]
    lowest = min(scales)
    if epsilons[-1] > lowest:
        raise InvalidInput(f"eps {epsilons[-1]} lies beyond the computed scale {lowest}")
    return lowest


def crocker_stack(barcodes, grid: ScaleGrid, dim: int) -> CrockerStack:
    """f(t, eps, alpha) = rank(V_t(eps - alpha) -> V_t(eps + alpha)) on the grid."""
    series = as_series(barcodes)
    max_scale = _check_range(series, grid.epsilons)
    values = np.stack([rank_grid(b, dim, grid.epsilons, grid.alphas) for b in series])
    return CrockerStack(series.times, grid.epsilons, grid.alphas, values, dim, max_scale)


def alpha_smoothed_plot(barcodes, grid: ScaleGrid, dim: int, alpha: float) -> CrockerPlot:
    if alpha < 0:
        raise InvalidInput("alpha must be non-negative")
    series = as_series(barcodes)
    max_scale = _check_range(series, grid.epsilons)
    values = np.stack([rank_grid(b, dim, grid.epsilons, np.array([alpha]))[:, 0] for b in series])
    return CrockerPlot(series.times, grid.epsilons, values, dim, float(alpha), max_scale)


def crocker_plot(barcodes, grid: ScaleGrid, dim: int) -> CrockerPlot:
    """Betti number of V_t(eps) for every grid time and scale."""
    return alpha_smoothed_plot(barcodes, grid, dim, 0.0)


def vectorize(plot: CrockerPlot) -> np.ndarray:
    """Row-major flattening: all eps values of the first time, then the next time."""
    return np.asarray(plot.values, dtype=float).reshape(-1)


def vectorize_stack(stack: CrockerStack) -> np.ndarray:
    """Plot vectors of each alpha slice, ascending alpha, concatenated."""
    return np.asarray(stack.values, dtype=float).transpose(2, 0, 1).reshape(-1)


def concat_dims(v0: Sequence[float], v1: Sequence[float]) -> np.ndarray:
    return np.concatenate([np.asarray(v0, dtype=float).reshape(-1), np.asarray(v1, dtype=float).reshape(-1)])
