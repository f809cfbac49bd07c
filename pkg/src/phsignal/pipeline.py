"""Window-by-window engine: cloud slices to diagrams to signal series.

Each window's cloud gets a distance matrix, a Rips filtration, reduced
diagrams, a landscape with L1/L2 norms, and finally a Wasserstein
distance to the next window's diagram. Essential classes are given the
window's enclosing radius as a finite death before landscapes or
distances are taken, and that substituted value is tagged in exports.

By default filtrations are cut at the window's cone radius: past that
scale the complex is contractible, so reported H0/H1 diagrams are
unchanged while the simplex count drops by roughly a third. The
spec-level default of ``build_filtration`` (enclosing radius) is not
affected; the cut is passed explicitly here and can be disabled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cloud import PointCloud, Window, WindowSpec, windows
from .detect import SignalParams, SignalSeries
from .landscape import build_landscape, lp_norm
from .persistence import PersistenceDiagram, diagrams, reduce
from .rips import build_filtration, cone_radius, distance_matrix, enclosing_radius
from .wasserstein import consecutive_distances

import numpy as np

__all__ = ["PipelineResult", "WindowSummary", "compute_signals", "summarize_window"]

NORM_KINDS = ("L1", "L2")


@dataclass(frozen=True)
class WindowSummary:
    """Diagrams and radius of one window, plus its end-of-window time."""

    start: int
    time: object
    radius: float  # enclosing radius; substituted for essential deaths
    diagram_h0: PersistenceDiagram
    diagram_h1: PersistenceDiagram


@dataclass(frozen=True)
class PipelineResult:
    windows: tuple[WindowSummary, ...]
    series: dict  # kind -> SignalSeries


def summarize_window(window: Window, time, maxdim: int = 2, tight: bool = True) -> WindowSummary:
    """Persistence diagrams of one window's point cloud."""
    dm = distance_matrix(window.cloud)
    radius = enclosing_radius(dm)
    cutoff = cone_radius(dm) if tight else radius
    filtration = build_filtration(dm, maxdim=maxdim, threshold=cutoff)
    h0, h1 = diagrams(reduce(filtration), dims=(0, 1))
    return WindowSummary(start=window.start, time=time, radius=radius, diagram_h0=h0, diagram_h1=h1)


def _signal_diagram(summary: WindowSummary, dim: int) -> PersistenceDiagram:
    diagram = summary.diagram_h0 if dim == 0 else summary.diagram_h1
    return diagram.with_finite_deaths(summary.radius)


def compute_signals(
    cloud: PointCloud,
    times,
    window: int = 60,
    step: int = 1,
    maxdim: int = 2,
    signal_dim: int = 1,
    wasserstein_p: float = 2.0,
    norms: tuple[str, ...] = NORM_KINDS,
    threads: int = 1,
    tight: bool = True,
) -> PipelineResult:
    """Run the full per-window analysis over a cloud.

    ``times`` carries one stamp per cloud point; each window is indexed
    by its last point's stamp. Norm series have one entry per window,
    the Wasserstein series one entry per consecutive pair.
    """
    if len(times) != len(cloud):
        raise ValueError(f"got {len(times)} times for {len(cloud)} points")
    for kind in norms:
        if kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {kind!r}")
    slices = windows(cloud, WindowSpec(size=window, step=step))
    stamps = [times[s.start + window - 1] for s in slices]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            summaries = list(
                pool.map(lambda args: summarize_window(args[0], args[1], maxdim, tight), zip(slices, stamps))
            )
    else:
        summaries = [summarize_window(s, t, maxdim, tight) for s, t in zip(slices, stamps)]

    signal_diagrams = [_signal_diagram(summary, signal_dim) for summary in summaries]
    series: dict[str, SignalSeries] = {}
    for kind in norms:
        p = 1 if kind == "L1" else 2
        values = np.array(
            [lp_norm(build_landscape(diagram), p).value for diagram in signal_diagrams]
        )
        series[kind] = SignalSeries(
            kind=kind,
            times=tuple(stamps),
            values=values,
            params=SignalParams(window=window, p=float(p), dim=signal_dim),
        )
    if len(signal_diagrams) >= 2:
        series["WD"] = consecutive_distances(
            signal_diagrams, p=wasserstein_p, times=stamps, window=window
        )
    return PipelineResult(windows=tuple(summaries), series=series)
