import math

import pytest

from phsignal import consecutive_distances, wasserstein_distance
from phsignal.errors import DimensionMismatch, TooFewDiagrams
from phsignal.persistence import PersistenceDiagram
from phsignal.wasserstein import bottleneck_distance

from conftest import random_diagram
from oracles import brute_wasserstein

ROOT2 = math.sqrt(2.0)


def diagram(points, dim=1):
    return PersistenceDiagram.from_points(dim, points)


class TestWassersteinDistance:
    def test_identical_diagrams(self, rng):
        for _ in range(5):
            d = random_diagram(rng)
            assert wasserstein_distance(d, d, p=2.0).distance == 0.0

    def test_single_point_to_empty(self):
        result = wasserstein_distance(diagram([(0.0, 2.0)]), diagram([]), p=2.0)
        assert result.distance == 1.0  # sup-distance to nearest diagonal point (1, 1)

    def test_two_bars_prefer_direct_move(self):
        a = diagram([(0.0, 4.0)])
        b = diagram([(0.0, 4.0 * ROOT2)])
        result = wasserstein_distance(a, b, p=1.0)
        assert result.distance == pytest.approx(4.0 * ROOT2 - 4.0, abs=1e-12)

    def test_matching_is_perfect(self):
        a = diagram([(0.0, 2.0), (1.0, 3.0)])
        b = diagram([(0.5, 2.5)])
        result = wasserstein_distance(a, b, p=2.0)
        left = {i for i, _ in result.matching}
        right = {j for _, j in result.matching}
        assert left == right == set(range(3))

    def test_agrees_with_enumeration(self, rng):
        for _ in range(25):
            a = random_diagram(rng, max_points=4)
            b = random_diagram(rng, max_points=4)
            for p in (1.0, 2.0):
                mine = wasserstein_distance(a, b, p).distance
                assert mine == brute_wasserstein(a.points, b.points, p)

    def test_symmetry_is_exact(self, rng):
        for _ in range(20):
            a = random_diagram(rng, max_points=6)
            b = random_diagram(rng, max_points=6)
            assert wasserstein_distance(a, b, 2.0).distance == wasserstein_distance(b, a, 2.0).distance

    def test_triangle_inequality(self, rng):
        for _ in range(20):
            a, b, c = (random_diagram(rng, max_points=6) for _ in range(3))
            dab = wasserstein_distance(a, b, 2.0).distance
            dbc = wasserstein_distance(b, c, 2.0).distance
            dac = wasserstein_distance(a, c, 2.0).distance
            assert dac <= dab + dbc + 1e-9

    def test_shared_point_never_increases_distance(self, rng):
        for _ in range(10):
            a = random_diagram(rng, max_points=4)
            b = random_diagram(rng, max_points=4)
            base = wasserstein_distance(a, b, 2.0).distance
            extra = (0.3, 1.7)
            a2 = PersistenceDiagram.from_points(a.dimension, list(a.points) + [extra])
            b2 = PersistenceDiagram.from_points(b.dimension, list(b.points) + [extra])
            assert wasserstein_distance(a2, b2, 2.0).distance <= base + 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            wasserstein_distance(diagram([], dim=0), diagram([], dim=1))

    def test_rejects_infinite_death(self):
        with pytest.raises(ValueError):
            wasserstein_distance(diagram([(0.0, math.inf)]), diagram([]))

    def test_rejects_p_below_one(self):
        with pytest.raises(ValueError):
            wasserstein_distance(diagram([]), diagram([]), p=0.5)


class TestConsecutiveDistances:
    def test_identical_diagrams_give_zero_series(self):
        d = diagram([(0.0, 1.0)])
        series = consecutive_distances([d, d, d, d])
        assert series.values.tolist() == [0.0, 0.0, 0.0]
        assert series.kind == "WD"

    def test_length_contract(self):
        ds = [diagram([(0.0, 1.0)]), diagram([(0.0, 2.0)]), diagram([(1.0, 2.0)])]
        assert len(consecutive_distances(ds)) == 2

    def test_alternating_with_empty(self):
        ds = [diagram([(0.0, 1.0)]), diagram([]), diagram([(0.0, 1.0)]), diagram([])]
        series = consecutive_distances(ds, p=2.0)
        assert series.values.tolist() == [0.5, 0.5, 0.5]

    def test_times_use_later_window(self):
        ds = [diagram([]), diagram([]), diagram([])]
        series = consecutive_distances(ds, times=(10, 20, 30))
        assert series.times == (20, 30)

    def test_too_few(self):
        with pytest.raises(TooFewDiagrams):
            consecutive_distances([diagram([])])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatch):
            consecutive_distances([diagram([], dim=0), diagram([], dim=1)])


class TestBottleneck:
    def test_identical(self):
        d = diagram([(0.0, 1.0), (0.5, 3.0)])
        assert bottleneck_distance(d, d) == 0.0

    def test_point_to_diagonal(self):
        assert bottleneck_distance(diagram([(0.0, 2.0)]), diagram([])) == 1.0

    def test_essentials_must_pair(self):
        a = diagram([(0.0, math.inf)])
        assert bottleneck_distance(a, diagram([])) == math.inf
        assert bottleneck_distance(a, diagram([(0.25, math.inf)])) == 0.25

    def test_never_exceeds_wasserstein(self, rng):
        for _ in range(10):
            a = random_diagram(rng, max_points=5)
            b = random_diagram(rng, max_points=5)
            assert bottleneck_distance(a, b) <= wasserstein_distance(a, b, 1.0).distance + 1e-12
