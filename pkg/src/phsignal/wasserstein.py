"""Degree-p Wasserstein distance between persistence diagrams.

Each diagram is augmented with one diagonal proxy per point of the
other, making the transport problem a square assignment: off-diagonal
pairs cost their sup-norm distance, matching a point to the diagonal
costs half its persistence (its sup-norm distance to the nearest
diagonal point), and diagonal-to-diagonal moves are free. The optimum
is found exactly with a Hungarian-family solver on the dense matrix of
p-th cost powers; diagram sizes here are tens of points, so cubic cost
is immaterial.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from dataclasses import dataclass

from .detect import SignalParams, SignalSeries
from .errors import DimensionMismatch, TooFewDiagrams
from .persistence import PersistenceDiagram

__all__ = ["WassersteinResult", "consecutive_distances", "wasserstein_distance"]


@dataclass(frozen=True)
class WassersteinResult:
    """Optimal transport cost and one optimal matching.

    Matching entries pair indices of the augmented sides: index i < |A|
    is the i-th point of A, larger indices are diagonal proxies, and
    symmetrically for B.
    """

    p: float
    distance: float
    matching: tuple[tuple[int, int], ...]


def _as_finite_array(diagram: PersistenceDiagram) -> np.ndarray:
    points = diagram.points
    if any(math.isinf(d) for _, d in points):
        raise ValueError("diagrams must be finite; substitute essential deaths first")
    return np.array(points, dtype=np.float64).reshape(len(points), 2)


def _augmented_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(|A|+|B|) square sup-norm cost matrix with diagonal proxies."""
    na, nb = len(a), len(b)
    costs = np.zeros((na + nb, na + nb))
    if na and nb:
        costs[:na, :nb] = np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)
    if na:
        costs[:na, nb:] = ((a[:, 1] - a[:, 0]) / 2.0)[:, None]
    if nb:
        costs[na:, :nb] = ((b[:, 1] - b[:, 0]) / 2.0)[None, :]
    return costs


def wasserstein_distance(a: PersistenceDiagram, b: PersistenceDiagram, p: float = 2.0) -> WassersteinResult:
    """Exact degree-p Wasserstein distance with sup-norm ground cost.

    The arguments are ordered canonically before solving so the result
    is exactly symmetric in a and b.
    """
    if a.dimension != b.dimension:
        raise DimensionMismatch(a.dimension, b.dimension)
    if p < 1.0:
        raise ValueError(f"degree p must be at least 1, got {p}")
    swapped = (len(b.points), b.points) < (len(a.points), a.points)
    if swapped:
        a, b = b, a
    pts_a = _as_finite_array(a)
    pts_b = _as_finite_array(b)
    costs = _augmented_costs(pts_a, pts_b)
    rows, cols = linear_sum_assignment(costs**p)
    total = math.fsum(float(costs[i, j]) ** p for i, j in zip(rows, cols))
    matching = tuple(zip(rows.tolist(), cols.tolist()))
    if swapped:
        matching = tuple(sorted((j, i) for i, j in matching))
    return WassersteinResult(p=p, distance=total ** (1.0 / p), matching=matching)


def consecutive_distances(
    diagrams: list[PersistenceDiagram],
    p: float = 2.0,
    times=None,
    window: int = 0,
) -> SignalSeries:
    """W_D between each diagram and its successor, as a signal series.

    Entry t compares diagrams t and t+1 and carries the time stamp of
    the later one (its window's end date). ``times``, when given, must
    have one entry per diagram.
    """
    if len(diagrams) < 2:
        raise TooFewDiagrams(len(diagrams))
    dimension = diagrams[0].dimension
    for diagram in diagrams[1:]:
        if diagram.dimension != dimension:
            raise DimensionMismatch(dimension, diagram.dimension)
    if times is None:
        times = tuple(range(len(diagrams)))
    elif len(times) != len(diagrams):
        raise ValueError(f"got {len(times)} times for {len(diagrams)} diagrams")
    values = np.array(
        [wasserstein_distance(diagrams[t], diagrams[t + 1], p).distance for t in range(len(diagrams) - 1)]
    )
    return SignalSeries(
        kind="WD",
        times=tuple(times[1:]),
        values=values,
        params=SignalParams(window=window, p=float(p), dim=dimension),
    )


def _essential_part_distance(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    births_a = sorted(a.essential_births())
    births_b = sorted(b.essential_births())
    if len(births_a) != len(births_b):
        return math.inf
    if not births_a:
        return 0.0
    return max(abs(x - y) for x, y in zip(births_a, births_b))


def _has_perfect_matching(allowed: np.ndarray) -> bool:
    """Kuhn's augmenting paths on a boolean bipartite adjacency matrix."""
    n = allowed.shape[0]
    match_of_right = np.full(n, -1)

    def try_assign(i: int, visited: np.ndarray) -> bool:
        for j in range(n):
            if allowed[i, j] and not visited[j]:
                visited[j] = True
                if match_of_right[j] < 0 or try_assign(match_of_right[j], visited):
                    match_of_right[j] = i
                    return True
        return False

    for i in range(n):
        if not try_assign(i, np.zeros(n, dtype=bool)):
            return False
    return True


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Smallest t admitting a perfect matching with all costs <= t.

    Essential classes must match each other by birth. Used internally
    for stability checks; not a pipeline signal.
    """
    if a.dimension != b.dimension:
        raise DimensionMismatch(a.dimension, b.dimension)
    essential = _essential_part_distance(a, b)
    if math.isinf(essential):
        return essential
    pts_a = np.array(a.finite_points(), dtype=np.float64).reshape(-1, 2)
    pts_b = np.array(b.finite_points(), dtype=np.float64).reshape(-1, 2)
    if len(pts_a) == 0 and len(pts_b) == 0:
        return essential
    costs = _augmented_costs(pts_a, pts_b)
    candidates = np.unique(costs)
    candidates = candidates[candidates >= essential]
    if len(candidates) == 0 or _has_perfect_matching(costs <= essential):
        return essential
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(costs <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])
