"""Persistence landscapes and their L1/L2 norms.

Every diagram point (b, d) contributes a tent: zero outside (b, d),
rising with slope +1 to the peak ((b+d)/2, (d-b)/2), falling with
slope -1 back to zero. Level j of the landscape is the pointwise j-th
largest tent value. Because all tent segments have slopes in
{-1, 0, +1}, any two of them can only cross at a half-sum of diagram
coordinates, so evaluating every tent on that candidate grid captures
each level exactly as a piecewise-linear function.

Norms integrate the stored segments in closed form; no quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .persistence import PersistenceDiagram

__all__ = ["NormValue", "PersistenceLandscape", "build_landscape", "landscape_rows", "lp_norm"]


@dataclass(frozen=True)
class PersistenceLandscape:
    """Decreasing sequence of piecewise-linear levels from one diagram.

    ``levels[j]`` is an (m_j, 2) array of (x, y) critical points with
    y >= 0; the function is linear between consecutive points and zero
    outside their span. Levels are 0-indexed here and 1-indexed in
    exported rows.
    """

    dimension: int
    levels: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.levels)

    def evaluate(self, level: int, x: float) -> float:
        """Value of 0-indexed ``level`` at ``x`` (0 outside its support)."""
        if level >= len(self.levels):
            return 0.0
        points = self.levels[level]
        xs, ys = points[:, 0], points[:, 1]
        if x <= xs[0] or x >= xs[-1]:
            return 0.0
        return float(np.interp(x, xs, ys))


def _critical_points(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Compact a sampled piecewise-linear function to its critical points."""
    support = np.nonzero(ys > 0.0)[0]
    first = max(support[0] - 1, 0)
    last = min(support[-1] + 1, len(xs) - 1)
    xs, ys = xs[first : last + 1], ys[first : last + 1]
    if len(xs) > 2:
        dx = np.diff(xs)
        dy = np.diff(ys)
        # a point is critical when the segments around it differ in slope;
        # exact comparison keeps harmless extra points rather than moving any
        bend = dy[:-1] * dx[1:] != dy[1:] * dx[:-1]
        keep = np.concatenate(([True], bend, [True]))
        xs, ys = xs[keep], ys[keep]
    return np.column_stack([xs, ys])


def build_landscape(diagram: PersistenceDiagram) -> PersistenceLandscape:
    """Landscape of a finite diagram (substitute essentials first)."""
    if any(math.isinf(d) for _, d in diagram.points):
        raise ValueError("landscape requires finite deaths; substitute essential classes first")
    if len(diagram.points) == 0:
        return PersistenceLandscape(diagram.dimension, ())
    births = np.array([b for b, _ in diagram.points])
    deaths = np.array([d for _, d in diagram.points])
    coords = np.concatenate([births, deaths])
    xs = np.unique((coords[:, None] + coords[None, :]).ravel() / 2.0)
    tents = np.minimum(xs[None, :] - births[:, None], deaths[:, None] - xs[None, :])
    np.maximum(tents, 0.0, out=tents)
    tents = -np.sort(-tents, axis=0)  # row j-1 = j-th largest
    levels = []
    for row in tents:
        if not np.any(row > 0.0):
            break
        levels.append(_critical_points(xs, row))
    return PersistenceLandscape(diagram.dimension, tuple(levels))


@dataclass(frozen=True)
class NormValue:
    p: int
    value: float


def _segment_integrals(points: np.ndarray, p: int) -> float:
    xs, ys = points[:, 0], points[:, 1]
    dx = np.diff(xs)
    y0, y1 = ys[:-1], ys[1:]
    if p == 1:
        return float(np.sum(dx * (y0 + y1) / 2.0))
    return float(np.sum(dx * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0))


def lp_norm(landscape: PersistenceLandscape, p: int) -> NormValue:
    """Closed-form landscape norm: sum of per-level integrals.

    p=1 sums the areas under the levels; p=2 takes the square root of
    the summed integrals of the squared levels.
    """
    if p not in (1, 2):
        raise ValueError(f"only p in {{1, 2}} is supported, got {p}")
    total = sum(_segment_integrals(level, p) for level in landscape.levels)
    return NormValue(p, total if p == 1 else math.sqrt(total))


def landscape_rows(landscape: PersistenceLandscape):
    """(level, x, y) critical-point rows; levels are reported 1-based."""
    rows = []
    for j, level in enumerate(landscape.levels, start=1):
        rows.extend((j, float(x), float(y)) for x, y in level)
    return rows
