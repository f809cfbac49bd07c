"""Loading, aligning and differencing of daily closing-price series.

One CSV file per series, header row required, dates ISO-8601 unless a
format string is given. Baskets are described by a JSON manifest that
maps series names to file paths. Alignment uses the intersection of
trading dates by default so that no price is ever fabricated; a
forward-fill policy is available for sparse calendars.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateDate,
    EmptyIntersection,
    InputDataError,
    MissingColumn,
    NonPositivePrice,
    TooShort,
    UnparsableRow,
)

DEFAULT_DATE_FORMAT = "%Y-%m-%d"


@dataclass(frozen=True)
class PriceSeries:
    """A single series of dated closing prices, sorted ascending."""

    name: str
    dates: tuple[date, ...]
    closes: np.ndarray  # float64, strictly positive

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class SeriesColumn:
    name: str
    closes: np.ndarray


@dataclass(frozen=True)
class PriceTable:
    """Several series aligned on one strictly increasing date axis."""

    dates: tuple[date, ...]
    series: tuple[SeriesColumn, ...]

    def __post_init__(self):
        l = len(self.dates)
        for col in self.series:
            if len(col.closes) != l:
                raise ValueError(f"series {col.name!r} has {len(col.closes)} closes for {l} dates")
            if not np.all(np.isfinite(col.closes)) or np.any(col.closes <= 0.0):
                raise ValueError(f"series {col.name!r} contains non-positive or non-finite closes")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")

    @property
    def names(self) -> list[str]:
        return [col.name for col in self.series]

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class ReturnMatrix:
    """Log-returns of an aligned table: one row per series, one column per day pair."""

    dates: tuple[date, ...]  # date of the later close in each ratio
    values: np.ndarray  # shape (n_series, len(dates))

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.dates):
            raise ValueError("values must be an (n_series, n_dates) matrix")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("log-returns contain non-finite entries")


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: str
    date_column: str = "Date"
    close_column: str = "Close"
    date_format: str = DEFAULT_DATE_FORMAT


def load_csv(
    path: str | Path,
    date_column: str = "Date",
    close_column: str = "Close",
    date_format: str = DEFAULT_DATE_FORMAT,
    name: str | None = None,
) -> PriceSeries:
    """Read one dated close series from a CSV file.

    Rows are returned sorted ascending by date. Duplicate dates and
    non-positive or unparsable values are rejected with the offending
    line number rather than silently repaired.
    """
    path = str(path)
    rows: list[tuple[date, float]] = []
    seen: dict[date, int] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise UnparsableRow(path, 1, "empty file, expected a header row")
        for column in (date_column, close_column):
            if column not in reader.fieldnames:
                raise MissingColumn(path, column)
        for record in reader:
            line = reader.line_num
            raw_date = record.get(date_column)
            raw_close = record.get(close_column)
            if raw_date is None or raw_close is None:
                raise UnparsableRow(path, line, "row has fewer fields than the header")
            try:
                day = datetime.strptime(raw_date.strip(), date_format).date()
            except ValueError:
                raise UnparsableRow(path, line, f"cannot parse date {raw_date!r} with format {date_format!r}")
            try:
                close = float(raw_close)
            except ValueError:
                raise UnparsableRow(path, line, f"cannot parse close {raw_close!r} as a decimal")
            if not math.isfinite(close) or close <= 0.0:
                raise NonPositivePrice(path, line, close)
            if day in seen:
                raise DuplicateDate(path, line, day)
            seen[day] = line
            rows.append((day, close))
    rows.sort(key=lambda item: item[0])
    return PriceSeries(
        name=name if name is not None else Path(path).stem,
        dates=tuple(day for day, _ in rows),
        closes=np.array([close for _, close in rows], dtype=np.float64),
    )


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Parse a basket manifest: {"series": [{"name": ..., "path": ...}, ...]}."""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{path}: manifest is not valid JSON: {exc}") from exc
    entries = document.get("series")
    if not isinstance(entries, list) or not entries:
        raise InputDataError(f"{path}: manifest must contain a non-empty 'series' list")
    result = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "name" not in entry or "path" not in entry:
            raise InputDataError(f"{path}: series entry {i} needs 'name' and 'path'")
        csv_path = Path(entry["path"])
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        result.append(
            ManifestEntry(
                name=str(entry["name"]),
                path=str(csv_path),
                date_column=str(entry.get("date_column", "Date")),
                close_column=str(entry.get("close_column", "Close")),
                date_format=str(entry.get("date_format", DEFAULT_DATE_FORMAT)),
            )
        )
    return result


def align(series_list: list[PriceSeries], policy: str = "intersection") -> PriceTable:
    """Merge series onto a common date axis.

    ``intersection`` keeps only dates present in every series.
    ``forward_fill`` keeps the union of dates from the latest first
    observation onward, carrying each series' previous close forward
    across its missing days.
    """
    if not series_list:
        raise ValueError("align requires at least one series")
    for s in series_list:
        if len(s) == 0:
            raise ValueError(f"series {s.name!r} is empty")
    if policy not in ("intersection", "forward_fill"):
        raise ValueError(f"unknown alignment policy {policy!r}")

    if policy == "intersection":
        common = set(series_list[0].dates)
        for s in series_list[1:]:
            common &= set(s.dates)
        if not common:
            raise EmptyIntersection()
        axis = sorted(common)
        columns = []
        for s in series_list:
            lookup = dict(zip(s.dates, s.closes))
            columns.append(SeriesColumn(s.name, np.array([lookup[d] for d in axis], dtype=np.float64)))
        return PriceTable(dates=tuple(axis), series=tuple(columns))

    start = max(s.dates[0] for s in series_list)
    axis = sorted({d for s in series_list for d in s.dates if d >= start})
    if not axis:
        raise EmptyIntersection()
    columns = []
    for s in series_list:
        lookup = dict(zip(s.dates, s.closes))
        # every series has an observation at or before axis[0] by choice of start
        last = lookup[max(d for d in s.dates if d <= axis[0])]
        filled = np.empty(len(axis), dtype=np.float64)
        for i, d in enumerate(axis):
            if d in lookup:
                last = lookup[d]
            filled[i] = last
        columns.append(SeriesColumn(s.name, filled))
    return PriceTable(dates=tuple(axis), series=tuple(columns))


def log_returns(table: PriceTable) -> ReturnMatrix:
    """Column j holds ln(P[., j+1] / P[., j]) for the aligned table."""
    if len(table) < 2:
        raise TooShort(len(table))
    closes = np.stack([col.closes for col in table.series])
    values = np.log(closes[:, 1:] / closes[:, :-1])
    return ReturnMatrix(dates=tuple(table.dates[1:]), values=values)
