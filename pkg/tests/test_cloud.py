from datetime import date

import numpy as np
import pytest

from phsignal import PointCloud, WindowSpec, build_cloud, windows
from phsignal.errors import WindowTooLarge
from phsignal.ingest import ReturnMatrix


def matrix(values):
    values = np.asarray(values, dtype=float)
    dates = tuple(date(2020, 1, d + 1) for d in range(values.shape[1]))
    return ReturnMatrix(dates=dates, values=values)


class TestBuildCloud:
    def test_single_series(self):
        cloud = build_cloud(matrix([[0.1, -0.2]]))
        assert cloud.points.shape == (2, 1)
        assert cloud.points.ravel().tolist() == [0.1, -0.2]

    def test_shape(self):
        cloud = build_cloud(matrix(np.zeros((3, 5)) + 0.01))
        assert cloud.points.shape == (5, 3)
        assert cloud.dimension == 3

    def test_transposition(self):
        a, b, c, d = 0.1, 0.2, 0.3, 0.4
        cloud = build_cloud(matrix([[a, b], [c, d]]))
        assert cloud.points.tolist() == [[a, c], [b, d]]

    def test_standardize(self, rng):
        cloud = build_cloud(matrix(rng.normal(0.001, 0.05, size=(3, 200))), standardize=True)
        assert np.allclose(cloud.points.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(cloud.points.std(axis=0), 1.0, atol=1e-12)


class TestWindows:
    def cloud(self, m, n=2):
        return PointCloud(np.arange(m * n, dtype=float).reshape(m, n))

    def test_full_span(self):
        wins = windows(self.cloud(5), WindowSpec(size=5))
        assert len(wins) == 1
        assert wins[0].start == 0
        assert len(wins[0].cloud) == 5

    def test_count(self):
        wins = windows(self.cloud(6), WindowSpec(size=4))
        assert [w.start for w in wins] == [0, 1, 2]

    def test_paper_window_size(self):
        wins = windows(self.cloud(60), WindowSpec(size=60))
        assert len(wins) == 1

    def test_too_large(self):
        with pytest.raises(WindowTooLarge):
            windows(self.cloud(5), WindowSpec(size=6))

    def test_slices_match_cloud(self, rng):
        cloud = PointCloud(rng.standard_normal((40, 3)))
        for w in windows(cloud, WindowSpec(size=7, step=3)):
            assert np.array_equal(w.cloud.points, cloud.points[w.start : w.start + 7])

    def test_count_formula(self, rng):
        for _ in range(50):
            m = int(rng.integers(2, 80))
            size = int(rng.integers(2, m + 1))
            step = int(rng.integers(1, 5))
            wins = windows(self.cloud(m), WindowSpec(size=size, step=step))
            assert len(wins) == (m - size) // step + 1

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            WindowSpec(size=1)
        with pytest.raises(ValueError):
            WindowSpec(size=5, step=0)
