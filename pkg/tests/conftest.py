from __future__ import annotations

import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from phsignal import PointCloud
from phsignal.persistence import PersistenceDiagram


def random_cloud(rng: np.random.Generator, m: int, n: int, scale: float = 1.0) -> PointCloud:
    return PointCloud(rng.standard_normal((m, n)) * scale)


def random_diagram(rng: np.random.Generator, max_points: int = 6, dim: int = 1) -> PersistenceDiagram:
    count = int(rng.integers(0, max_points + 1))
    births = rng.uniform(0.0, 2.0, size=count)
    lifetimes = rng.uniform(1e-3, 2.0, size=count)
    return PersistenceDiagram.from_points(dim, zip(births, births + lifetimes))


def write_price_csv(path: Path, start: date, closes, date_column="Date", close_column="Close") -> None:
    lines = [f"{date_column},{close_column}"]
    day = start
    for close in closes:
        lines.append(f"{day.isoformat()},{close!r}")
        day += timedelta(days=1)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
