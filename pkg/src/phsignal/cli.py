"""Command-line pipeline: manifest + CSVs in, diagrams and reports out.

``phsignal run --config cfg.json`` executes the whole chain: load and
align the basket, take log-returns, slide windows over the point
cloud, compute diagrams, landscape norms and consecutive Wasserstein
distances, threshold them, and write CSV/JSON artifacts. Outputs are
byte-deterministic for identical inputs and configuration: floats are
formatted with 17 significant digits, JSON keys are sorted, and no
timestamps are embedded.

``phsignal demo-square`` prints the diagrams of the built-in 4-point
square cloud, whose H1 bar is (4, 4*sqrt(2)).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .cloud import PointCloud, build_cloud
from .detect import (
    QUORUM_CHOICES,
    classify_events,
    elevated_periods,
    signal_rows,
    threshold,
)
from .errors import ConfigError, InputDataError, PhSignalError, SeriesTooShort
from .ingest import align, load_csv, load_manifest, log_returns
from .persistence import diagram_rows, diagrams, reduce
from .pipeline import NORM_KINDS, compute_signals
from .rips import build_filtration, distance_matrix

__all__ = ["RunConfig", "demo_square", "main", "run"]


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; JSON round-trips losslessly."""

    manifest: str
    window: int = 60
    step: int = 1
    maxdim: int = 2
    signal_dim: int = 1
    wasserstein_p: float = 2.0
    norms: tuple[str, ...] = NORM_KINDS
    k_sigma: float = 4.0
    elevated_k: float = 2.0
    min_run: int = 3
    quorum: str = "any"
    alignment: str = "intersection"
    standardize: bool = False
    threads: int = 1
    out_dir: str = "out"

    def validate(self) -> None:
        checks = [
            (self.window >= 2, f"window must be at least 2, got {self.window}"),
            (self.step >= 1, f"step must be positive, got {self.step}"),
            (self.maxdim >= 1, f"maxdim must be at least 1, got {self.maxdim}"),
            (self.signal_dim in (0, 1), f"signal dimension must be 0 or 1, got {self.signal_dim}"),
            (self.wasserstein_p >= 1.0, f"wasserstein p must be at least 1, got {self.wasserstein_p}"),
            (len(self.norms) > 0, "at least one norm kind is required"),
            (all(n in NORM_KINDS for n in self.norms), f"norms must be among {NORM_KINDS}"),
            (self.k_sigma > 0.0, f"k_sigma must be positive, got {self.k_sigma}"),
            (self.elevated_k > 0.0, f"elevated_k must be positive, got {self.elevated_k}"),
            (self.min_run >= 1, f"min_run must be positive, got {self.min_run}"),
            (self.quorum in QUORUM_CHOICES, f"quorum must be one of {QUORUM_CHOICES}"),
            (self.alignment in ("intersection", "forward_fill"), "alignment must be intersection or forward_fill"),
            (self.threads >= 1, f"threads must be positive, got {self.threads}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["norms"] = list(self.norms)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {field.name for field in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "manifest" not in data:
            raise ConfigError("config must name a manifest file")
        if "norms" in data:
            data = dict(data, norms=tuple(data["norms"]))
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a JSON object")
        config = cls.from_dict(data)
        manifest = Path(config.manifest)
        if not manifest.is_absolute():
            config = dataclasses.replace(config, manifest=str(path.parent / manifest))
        return config


def _g(x: float) -> str:
    return format(float(x), ".17g")


def _t(value) -> str:
    return value.isoformat() if hasattr(value, "isoformat") else str(value)


def _write_lines(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _episode_json(episode) -> dict:
    return {"start": _t(episode.start), "end": _t(episode.end), "peak": episode.peak}


def run(config: RunConfig) -> Path:
    """Execute the pipeline and write artifacts into ``config.out_dir``."""
    config.validate()
    try:
        entries = load_manifest(config.manifest)
        series_list = [
            load_csv(e.path, e.date_column, e.close_column, e.date_format, name=e.name)
            for e in entries
        ]
    except OSError as exc:
        raise InputDataError(str(exc)) from exc
    table = align(series_list, policy=config.alignment)
    returns = log_returns(table)
    cloud = build_cloud(returns, standardize=config.standardize)
    result = compute_signals(
        cloud,
        returns.dates,
        window=config.window,
        step=config.step,
        maxdim=config.maxdim,
        signal_dim=config.signal_dim,
        wasserstein_p=config.wasserstein_p,
        norms=config.norms,
        threads=config.threads,
    )

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lines = ["window_start,dim,birth,death,essential"]
    for summary in result.windows:
        rows = diagram_rows(summary.start, [summary.diagram_h0, summary.diagram_h1], summary.radius)
        lines.extend(f"{s},{d},{_g(b)},{_g(dth)},{flag}" for s, d, b, dth, flag in rows)
    _write_lines(out / "diagrams.csv", lines)

    norm_kinds = [kind for kind in config.norms]
    lines = ["window_start,date," + ",".join(kind.lower() for kind in norm_kinds)]
    for i, summary in enumerate(result.windows):
        cells = [str(summary.start), _t(summary.time)]
        cells.extend(_g(result.series[kind].values[i]) for kind in norm_kinds)
        lines.append(",".join(cells))
    _write_lines(out / "norms.csv", lines)

    if "WD" in result.series:
        wd = result.series["WD"]
        lines = ["window_start,date,wd"]
        for i, value in enumerate(wd.values):
            lines.append(f"{result.windows[i + 1].start},{_t(wd.times[i])},{_g(value)}")
        _write_lines(out / "wasserstein.csv", lines)

    detection: dict = {"quorum": config.quorum, "signals": {}, "events": []}
    reports = []
    for kind, series in sorted(result.series.items()):
        entry: dict = {
            "params": {"window": series.params.window, "p": series.params.p, "dim": series.params.dim},
        }
        try:
            report = threshold(series, config.k_sigma)
            elevated = elevated_periods(series, config.elevated_k, config.min_run, config.k_sigma)
        except SeriesTooShort:
            entry["note"] = "series too short for thresholding"
            detection["signals"][kind] = entry
            continue
        reports.append(report)
        entry.update(
            {
                "mean": report.mean,
                "std": report.std,
                "k_sigma": report.k_sigma,
                "threshold": report.threshold,
                "crossings": [{"date": _t(t), "value": v} for t, v in report.crossings],
                "episodes": [_episode_json(e) for e in report.episodes],
                "elevated": [_episode_json(e) for e in elevated],
            }
        )
        detection["signals"][kind] = entry
        lines = ["date,value,mean,threshold,crossing"]
        lines.extend(
            f"{_t(t)},{_g(v)},{_g(m)},{_g(thr)},{flag}"
            for t, v, m, thr, flag in signal_rows(series, report)
        )
        _write_lines(out / f"signal_{kind.lower()}.csv", lines)
    if reports:
        summary = classify_events(reports, quorum=config.quorum)
        detection["events"] = [
            {
                "start": _t(event.start),
                "end": _t(event.end),
                "signals": {kind: [_t(t) for t in dates] for kind, dates in sorted(event.signals.items())},
            }
            for event in summary.events
        ]
    (out / "detection.json").write_text(
        json.dumps(detection, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    metadata = {
        "package": "phsignal",
        "version": __version__,
        "config": config.to_dict(),
        "inputs": {e.name: _sha256(e.path) for e in entries},
        "manifest_sha256": _sha256(config.manifest),
        "series": table.names,
        "aligned_days": len(table),
        "windows": len(result.windows),
    }
    (out / "run_meta.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out


def demo_square(scale: float = 1.0) -> str:
    """Diagrams of the four-corner square cloud at the given scale."""
    if scale <= 0.0:
        raise ConfigError(f"scale must be positive, got {scale}")
    points = np.array([[2.0, 2.0], [2.0, 6.0], [6.0, 2.0], [6.0, 6.0]]) * scale
    filtration = build_filtration(distance_matrix(PointCloud(points)), maxdim=2)
    h0, h1 = diagrams(reduce(filtration))
    lines = []
    for label, diagram in (("H0", h0), ("H1", h1)):
        lines.append(label)
        for (birth, death), mult in sorted(Counter(diagram.points).items()):
            death_str = "inf" if math.isinf(death) else _g(death)
            lines.append(f"({_g(birth)}, {death_str}) x{mult}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phsignal",
        description="Sliding-window persistent-homology signals over price baskets",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_cmd = commands.add_parser("run", help="execute the pipeline from a JSON config")
    run_cmd.add_argument("--config", required=True, help="JSON run configuration")
    run_cmd.add_argument("--window", type=int, help="override window size")
    run_cmd.add_argument("--step", type=int, help="override window step")
    run_cmd.add_argument("--maxdim", type=int, help="override maximum simplex dimension")
    run_cmd.add_argument("--p", type=float, dest="wasserstein_p", help="override Wasserstein degree")
    run_cmd.add_argument("--dim", type=int, dest="signal_dim", help="override signal homology dimension")
    run_cmd.add_argument("--sigma", type=float, dest="k_sigma", help="override extreme-event k")
    run_cmd.add_argument("--threads", type=int, help="override worker thread count")
    run_cmd.add_argument("--out", dest="out_dir", help="override output directory")

    demo_cmd = commands.add_parser("demo-square", help="print diagrams of the built-in square cloud")
    demo_cmd.add_argument("--scale", type=float, default=1.0)

    commands.add_parser("version", help="print the package version")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "version":
            print(__version__)
            return 0
        if args.command == "demo-square":
            sys.stdout.write(demo_square(args.scale))
            return 0
        config = RunConfig.from_file(args.config)
        overrides = {
            name: getattr(args, name)
            for name in ("window", "step", "maxdim", "wasserstein_p", "signal_dim", "k_sigma", "threads", "out_dir")
            if getattr(args, name) is not None
        }
        if overrides:
            config = dataclasses.replace(config, **overrides)
        out = run(config)
        print(f"wrote artifacts to {out}")
        return 0
    except InputDataError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (PhSignalError, ValueError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
