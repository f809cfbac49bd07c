"""Topological signal extraction for baskets of price time series.

Aligned closing prices become log-return point clouds; sliding windows
of the cloud get Vietoris-Rips persistence diagrams; each diagram is
summarised by persistence-landscape L1/L2 norms and the Wasserstein
distance to its successor; windows where a summary exceeds
mean + k*sigma are flagged as extreme events.
"""

__version__ = "0.1.0"

from .cloud import PointCloud, Window, WindowSpec, build_cloud, windows
from .detect import (
    Episode,
    EventSummary,
    ExtremeEvent,
    SignalParams,
    SignalSeries,
    ThresholdReport,
    classify_events,
    elevated_periods,
    threshold,
)
from .ingest import (
    PriceSeries,
    PriceTable,
    ReturnMatrix,
    align,
    load_csv,
    load_manifest,
    log_returns,
)
from .landscape import NormValue, PersistenceLandscape, build_landscape, lp_norm
from .persistence import PersistenceDiagram, ReductionResult, diagrams, reduce
from .pipeline import PipelineResult, compute_signals, summarize_window
from .rips import (
    FilteredSimplex,
    Filtration,
    build_filtration,
    cone_radius,
    distance_matrix,
    enclosing_radius,
)
from .wasserstein import WassersteinResult, consecutive_distances, wasserstein_distance

__all__ = [
    "Episode",
    "EventSummary",
    "ExtremeEvent",
    "FilteredSimplex",
    "Filtration",
    "NormValue",
    "PersistenceDiagram",
    "PersistenceLandscape",
    "PipelineResult",
    "PointCloud",
    "PriceSeries",
    "PriceTable",
    "ReductionResult",
    "ReturnMatrix",
    "SignalParams",
    "SignalSeries",
    "ThresholdReport",
    "WassersteinResult",
    "Window",
    "WindowSpec",
    "align",
    "build_cloud",
    "build_filtration",
    "build_landscape",
    "classify_events",
    "compute_signals",
    "cone_radius",
    "consecutive_distances",
    "diagrams",
    "distance_matrix",
    "elevated_periods",
    "enclosing_radius",
    "load_csv",
    "load_manifest",
    "log_returns",
    "lp_norm",
    "reduce",
    "summarize_window",
    "threshold",
    "wasserstein_distance",
    "windows",
]
