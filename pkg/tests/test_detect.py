import numpy as np
import pytest

from phsignal import classify_events, elevated_periods, threshold
from phsignal.detect import SignalParams, SignalSeries, signal_rows
from phsignal.errors import SeriesTooShort

PARAMS = SignalParams(window=60, p=1.0, dim=1)


def series(values, kind="L1", times=None):
    values = np.asarray(values, dtype=float)
    if times is None:
        times = tuple(range(len(values)))
    return SignalSeries(kind=kind, times=tuple(times), values=values, params=PARAMS)


class TestThreshold:
    def test_constant_series_has_no_crossings(self):
        report = threshold(series([1.0] * 50), k_sigma=4.0)
        assert report.std == 0.0
        assert report.crossings == ()
        assert report.episodes == ()

    def test_single_spike_crosses_at_four_sigma(self):
        values = [1.0] * 99 + [100.0]
        report = threshold(series(values), k_sigma=4.0)
        mean = sum(values) / 100.0
        std = (sum((v - mean) ** 2 for v in values) / 100.0) ** 0.5
        assert report.mean == pytest.approx(mean)
        assert report.std == pytest.approx(std)
        assert 100.0 > mean + 4.0 * std
        assert [t for t, _ in report.crossings] == [99]

    def test_population_std_is_used(self):
        report = threshold(series([0.0, 2.0]), k_sigma=1.0)
        assert report.std == 1.0  # divide-by-N, not N-1

    def test_crossing_is_strict(self):
        report = threshold(series([0.0, 2.0]), k_sigma=1.0)
        assert report.threshold == 2.0
        assert report.crossings == ()  # 2.0 is not strictly above 2.0

    def test_episode_merging(self):
        values = [1.0] * 10 + [50.0, 60.0, 55.0] + [1.0] * 10 + [70.0] + [1.0] * 10
        report = threshold(series(values), k_sigma=1.0)
        assert len(report.episodes) == 2
        first, second = report.episodes
        assert (first.start, first.end, first.peak) == (10, 12, 60.0)
        assert (second.start, second.end, second.peak) == (23, 23, 70.0)

    def test_raising_k_never_adds_crossings(self, rng):
        for _ in range(20):
            s = series(rng.uniform(0.0, 5.0, size=60))
            counts = [len(threshold(s, k).crossings) for k in (0.5, 1.0, 2.0, 4.0)]
            assert counts == sorted(counts, reverse=True)

    def test_scale_equivariance(self, rng):
        values = rng.uniform(0.0, 5.0, size=80)
        base = threshold(series(values), 2.0)
        scaled = threshold(series(values * 7.5), 2.0)
        assert [t for t, _ in base.crossings] == [t for t, _ in scaled.crossings]

    def test_episodes_partition_crossings(self, rng):
        for _ in range(10):
            s = series(rng.uniform(0.0, 5.0, size=100))
            report = threshold(s, 1.0)
            covered = [
                t for t, _ in report.crossings
                if sum(1 for e in report.episodes if e.start <= t <= e.end) == 1
            ]
            assert covered == [t for t, _ in report.crossings]

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            threshold(series([1.0]), 4.0)


class TestClassifyEvents:
    def crossing_reports(self, kinds, spike_at):
        reports = []
        for kind in kinds:
            values = [1.0] * 100
            for i in spike_at.get(kind, []):
                values[i] = 60.0
            reports.append(threshold(series(values, kind=kind), k_sigma=4.0))
        return reports

    def test_unanimous_event(self):
        reports = self.crossing_reports(
            ["L1", "L2", "WD"], {"L1": [10], "L2": [10, 11], "WD": [11]}
        )
        summary = classify_events(reports, quorum="any")
        assert len(summary.events) == 1
        event = summary.events[0]
        assert (event.start, event.end) == (10, 11)
        assert set(event.signals) == {"L1", "L2", "WD"}

    def test_quiet_market(self):
        reports = self.crossing_reports(["L1", "L2", "WD"], {})
        assert classify_events(reports).events == ()

    def test_single_signal_quorum(self):
        reports = self.crossing_reports(["L1", "L2", "WD"], {"WD": [5]})
        assert len(classify_events(reports, quorum="any").events) == 1
        assert classify_events(reports, quorum="majority").events == ()
        assert classify_events(reports, quorum="all").events == ()

    def test_disjoint_episodes_stay_separate(self):
        reports = self.crossing_reports(["L1", "WD"], {"L1": [5], "WD": [20]})
        summary = classify_events(reports, quorum="any")
        assert len(summary.events) == 2

    def test_bad_quorum(self):
        with pytest.raises(ValueError):
            classify_events([], quorum="plurality")


class TestElevatedPeriods:
    def build(self, plateau):
        # 4-sigma spike at index 10, optional 2-sigma plateau right after;
        # levels chosen so the plateau sits between the 2- and 4-sigma lines
        values = np.ones(60)
        values[10] = 100.0
        if plateau:
            values[11:16] = 40.0
        s = series(values)
        report4 = threshold(s, 4.0)
        report2 = threshold(s, 2.0)
        assert [t for t, _ in report4.crossings] == [10]
        if plateau:
            assert {t for t, _ in report2.crossings} >= {11, 12, 13, 14, 15}
        return s

    def test_post_spike_plateau_is_reported(self):
        s = self.build(plateau=True)
        episodes = elevated_periods(s, k_sigma=2.0, min_run=3)
        assert len(episodes) == 1
        assert (episodes[0].start, episodes[0].end) == (11, 15)

    def test_immediate_return_to_mean(self):
        s = self.build(plateau=False)
        assert elevated_periods(s, k_sigma=2.0, min_run=3) == ()

    def test_min_run_one_keeps_every_post_event_crossing(self):
        values = np.ones(60)
        values[10] = 100.0
        values[20] = 35.0
        values[30] = 35.0
        s = series(values)
        episodes = elevated_periods(s, k_sigma=2.0, min_run=1)
        assert [(e.start, e.end) for e in episodes] == [(20, 20), (30, 30)]

    def test_no_extreme_event_means_no_periods(self):
        values = np.ones(60)
        values[20:25] = 1.5
        assert elevated_periods(series(values), k_sigma=2.0, min_run=3) == ()

    def test_runs_shorter_than_min_run_are_dropped(self):
        values = np.ones(60)
        values[10] = 100.0
        values[12:14] = 40.0  # run of 2 < min_run 3
        assert elevated_periods(series(values), k_sigma=2.0, min_run=3) == ()


class TestSeriesValidation:
    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            SignalSeries("L1", (0, 1), np.array([1.0]), PARAMS)

    def test_rejects_unsorted_times(self):
        with pytest.raises(ValueError):
            SignalSeries("L1", (1, 0), np.array([1.0, 2.0]), PARAMS)

    def test_rejects_negative_values(self):
        with pytest.raises(ValueError):
            SignalSeries("L1", (0, 1), np.array([1.0, -2.0]), PARAMS)

    def test_signal_rows(self):
        s = series([1.0, 5.0])
        report = threshold(s, 1.0)
        rows = signal_rows(s, report)
        assert rows == [
            (0, 1.0, report.mean, report.threshold, 0),
            (1, 5.0, report.mean, report.threshold, 1),
        ]
