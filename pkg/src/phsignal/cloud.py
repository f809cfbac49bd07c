"""Point clouds from return matrices and sliding windows over them.

Day j of an n-series return matrix becomes the point
(R[0,j], ..., R[n-1,j]) in R^n, preserving time order. Windows are
contiguous slices of that cloud.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowTooLarge
from .ingest import ReturnMatrix


@dataclass(frozen=True)
class PointCloud:
    """Time-ordered points in R^n, one row per day."""

    points: np.ndarray  # shape (m, n) float64

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] < 1:
            raise ValueError("points must be a non-empty (m, n) array")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points contain non-finite coordinates")

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class WindowSpec:
    """Sliding-window geometry: size in days and step between starts."""

    size: int = 60
    step: int = 1

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"window size must be at least 2, got {self.size}")
        if self.step < 1:
            raise ValueError(f"step must be positive, got {self.step}")


@dataclass(frozen=True)
class Window:
    start: int
    cloud: PointCloud


def build_cloud(returns: ReturnMatrix, standardize: bool = False) -> PointCloud:
    """Transpose a return matrix into a cloud of daily points.

    ``standardize`` optionally z-scores each series across time before
    the transpose; distances are otherwise taken on raw log-returns.
    """
    values = returns.values
    if values.shape[1] == 0:
        raise ValueError("return matrix has no columns")
    if standardize:
        mean = values.mean(axis=1, keepdims=True)
        std = values.std(axis=1, keepdims=True)
        std[std == 0.0] = 1.0
        values = (values - mean) / std
    return PointCloud(points=np.ascontiguousarray(values.T, dtype=np.float64))


def windows(cloud: PointCloud, spec: WindowSpec) -> list[Window]:
    """All windows of ``spec.size`` consecutive points, ``spec.step`` apart.

    With step 1 a cloud of m points yields m - size + 1 windows starting
    at 0..m-size.
    """
    m = len(cloud)
    if spec.size > m:
        raise WindowTooLarge(spec.size, m)
    starts = range(0, m - spec.size + 1, spec.step)
    return [Window(start=s, cloud=PointCloud(cloud.points[s : s + spec.size])) for s in starts]
