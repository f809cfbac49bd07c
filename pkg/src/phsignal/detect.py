"""Mean-plus-k-sigma thresholding of signal series.

A signal (landscape norm or Wasserstein distance per window) is
compared against mu + k*sigma computed over the whole series with the
population standard deviation, matching the single horizontal
threshold line a report reader expects. Crossings are strict. An
extreme event is an episode where at least a quorum of signal kinds
cross at the k=4 threshold; elevated-stress periods are sustained
k=2 crossings after the last extreme event.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort

__all__ = [
    "Episode",
    "EventSummary",
    "ExtremeEvent",
    "SignalParams",
    "SignalSeries",
    "ThresholdReport",
    "classify_events",
    "elevated_periods",
    "signal_rows",
    "threshold",
]

QUORUM_CHOICES = ("any", "majority", "all")


@dataclass(frozen=True)
class SignalParams:
    """Provenance of a signal: window size, degree/order p, homology dim."""

    window: int
    p: float
    dim: int


@dataclass(frozen=True)
class SignalSeries:
    """Time-indexed scalar summaries of one kind (L1, L2 or WD)."""

    kind: str
    times: tuple
    values: np.ndarray
    params: SignalParams

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError(f"{len(self.times)} times for {len(self.values)} values")
        if any(a >= b for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if np.any(self.values < 0.0) or not np.all(np.isfinite(self.values)):
            raise ValueError("signal values must be finite and non-negative")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Episode:
    """Maximal run of consecutive crossing windows."""

    start: object
    end: object
    peak: float


@dataclass(frozen=True)
class ThresholdReport:
    kind: str
    mean: float
    std: float
    k_sigma: float
    threshold: float
    crossings: tuple[tuple[object, float], ...]
    episodes: tuple[Episode, ...]


def _runs(mask) -> list[tuple[int, int]]:
    """Maximal runs of consecutive True entries, as inclusive index spans."""
    runs = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _episodes_from_mask(times, values, mask) -> tuple[Episode, ...]:
    return tuple(
        Episode(start=times[i], end=times[j], peak=float(values[i : j + 1].max()))
        for i, j in _runs(mask)
    )


def threshold(series: SignalSeries, k_sigma: float) -> ThresholdReport:
    """Crossings and episodes strictly above mu + k_sigma * sigma."""
    if len(series) < 2:
        raise SeriesTooShort(len(series), 2)
    if k_sigma <= 0.0:
        raise ValueError(f"k_sigma must be positive, got {k_sigma}")
    mean = float(series.values.mean())
    std = float(series.values.std())  # population: single descriptive line per figure
    level = mean + k_sigma * std
    mask = series.values > level
    crossings = tuple(
        (series.times[i], float(series.values[i])) for i in np.nonzero(mask)[0]
    )
    return ThresholdReport(
        kind=series.kind,
        mean=mean,
        std=std,
        k_sigma=float(k_sigma),
        threshold=level,
        crossings=crossings,
        episodes=_episodes_from_mask(series.times, series.values, mask),
    )


@dataclass(frozen=True)
class ExtremeEvent:
    """One merged crossing period with the dates each signal crossed."""

    start: object
    end: object
    signals: dict


@dataclass(frozen=True)
class EventSummary:
    quorum: str
    events: tuple[ExtremeEvent, ...]


def classify_events(reports: list[ThresholdReport], quorum: str = "any") -> EventSummary:
    """Merge overlapping episodes across signal kinds into labelled events.

    An event qualifies when the number of distinct signal kinds crossing
    inside it meets the quorum: any single kind, a strict majority, or
    all kinds present in ``reports``.
    """
    if quorum not in QUORUM_CHOICES:
        raise ValueError(f"quorum must be one of {QUORUM_CHOICES}, got {quorum!r}")
    tagged = [
        (episode.start, episode.end, report.kind)
        for report in reports
        for episode in report.episodes
    ]
    if not tagged:
        return EventSummary(quorum=quorum, events=())
    tagged.sort(key=lambda item: (item[0], item[1]))
    merged: list[list] = []
    for start, end, kind in tagged:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
            merged[-1][2].add(kind)
        else:
            merged.append([start, end, {kind}])
    n_kinds = len({report.kind for report in reports})
    needed = {"any": 1, "majority": n_kinds // 2 + 1, "all": n_kinds}[quorum]
    events = []
    for start, end, kinds in merged:
        if len(kinds) < needed:
            continue
        per_signal = {}
        for report in reports:
            dates = [t for t, _ in report.crossings if start <= t <= end]
            if dates:
                per_signal[report.kind] = dates
        events.append(ExtremeEvent(start=start, end=end, signals=per_signal))
    return EventSummary(quorum=quorum, events=tuple(events))


def elevated_periods(
    series: SignalSeries,
    k_sigma: float = 2.0,
    min_run: int = 3,
    event_k_sigma: float = 4.0,
) -> tuple[Episode, ...]:
    """Sustained k=2 stress after the last extreme event.

    Returns maximal runs of at least ``min_run`` consecutive windows
    above mu + k_sigma * sigma that start strictly after the final
    ``event_k_sigma`` episode ends; empty when no such episode exists.
    """
    if min_run < 1:
        raise ValueError(f"min_run must be positive, got {min_run}")
    if len(series) < min_run:
        raise SeriesTooShort(len(series), min_run)
    events = threshold(series, event_k_sigma).episodes
    if not events:
        return ()
    last_end = max(episode.end for episode in events)
    report = threshold(series, k_sigma)
    after = np.array([t > last_end for t in series.times])
    mask = (series.values > report.threshold) & after
    kept = [(i, j) for i, j in _runs(mask) if j - i + 1 >= min_run]
    return tuple(
        Episode(start=series.times[i], end=series.times[j], peak=float(series.values[i : j + 1].max()))
        for i, j in kept
    )


def signal_rows(series: SignalSeries, report: ThresholdReport):
    """(date, value, mean, threshold, crossing) rows for CSV export."""
    return [
        (t, float(v), report.mean, report.threshold, int(v > report.threshold))
        for t, v in zip(series.times, series.values)
    ]
