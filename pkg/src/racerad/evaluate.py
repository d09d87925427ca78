"""Track-to-truth alignment and range/velocity error statistics."""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

DEFAULT_TOLERANCE = 0.025  # s, half a 20 Hz frame period


@dataclass(frozen=True)
class AlignedPair:
    timestamp: float
    est_range: float
    true_range: float
    est_velocity: float
    true_velocity: float


class RunRmse(NamedTuple):
    range_rmse: float
    velocity_rmse: float
    sample_count: int = 0


@dataclass
class RmseReport:
    """Error statistics of one or more repeated runs.

    ``range_rmse``/``velocity_rmse`` pool every aligned pair of every run;
    the ``*_mean``/``*_std`` pairs are the mean and population standard
    deviation of the per-run RMSEs.
    """

    range_rmse: float
    velocity_rmse: float
    range_rmse_mean: float
    range_rmse_std: float
    velocity_rmse_mean: float
    velocity_rmse_std: float
    range_rmse_per_run: list = field(default_factory=list)
    velocity_rmse_per_run: list = field(default_factory=list)
    sample_count_per_run: list = field(default_factory=list)
    sample_count: int = 0

    @property
    def runs(self) -> int:
        return len(self.range_rmse_per_run)

    def to_dict(self) -> dict:
        return {
            "range_rmse_m": self.range_rmse,
            "velocity_rmse_mps": self.velocity_rmse,
            "range_rmse_mean_m": self.range_rmse_mean,
            "range_rmse_std_m": self.range_rmse_std,
            "velocity_rmse_mean_mps": self.velocity_rmse_mean,
            "velocity_rmse_std_mps": self.velocity_rmse_std,
            "range_rmse_per_run_m": list(self.range_rmse_per_run),
            "velocity_rmse_per_run_mps": list(self.velocity_rmse_per_run),
            "sample_count_per_run": list(self.sample_count_per_run),
            "sample_count": self.sample_count,
            "run_count": self.runs,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RmseReport":
        return cls(
            range_rmse=d["range_rmse_m"],
            velocity_rmse=d["velocity_rmse_mps"],
            range_rmse_mean=d["range_rmse_mean_m"],
            range_rmse_std=d["range_rmse_std_m"],
            velocity_rmse_mean=d["velocity_rmse_mean_mps"],
            velocity_rmse_std=d["velocity_rmse_std_mps"],
            range_rmse_per_run=list(d["range_rmse_per_run_m"]),
            velocity_rmse_per_run=list(d["velocity_rmse_per_run_mps"]),
            sample_count_per_run=list(d["sample_count_per_run"]),
            sample_count=int(d["sample_count"]),
        )


def _check_sorted(ts, what):
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError(f"{what} must be sorted by timestamp")


def align(tracks: Sequence, truth: Sequence, tolerance: float = DEFAULT_TOLERANCE) -> list[AlignedPair]:
    """Pair in-range track points with the nearest unused in-range truth point.

    Points farther apart than ``tolerance`` seconds stay unpaired; both the
    estimate and the truth must be flagged in range to produce a pair.
    """
    t_track = [p.timestamp for p in tracks]
    t_truth = [g.timestamp for g in truth]
    _check_sorted(t_track, "tracks")
    _check_sorted(t_truth, "truth")
    used = [False] * len(truth)
    pairs = []
    for p in tracks:
        if not p.in_range:
            continue
        i = bisect.bisect_left(t_truth, p.timestamp - tolerance)
        best, best_dt = None, math.inf
        while i < len(truth) and t_truth[i] <= p.timestamp + tolerance:
            dt = abs(t_truth[i] - p.timestamp)
            if not used[i] and dt < best_dt:
                best, best_dt = i, dt
            i += 1
        if best is None:
            continue
        g = truth[best]
        used[best] = True
        if not g.in_range:
            continue
        pairs.append(AlignedPair(p.timestamp, p.range, g.range, p.radial_velocity, g.radial_velocity))
    return pairs


def compute_rmse(pairs: Sequence[AlignedPair]) -> tuple[float, float]:
    """(range RMSE, velocity RMSE) over aligned pairs."""
    if not pairs:
        raise ValueError("need at least one aligned pair")
    dr = np.array([p.est_range - p.true_range for p in pairs])
    dv = np.array([p.est_velocity - p.true_velocity for p in pairs])
    return float(np.sqrt(np.mean(dr**2))), float(np.sqrt(np.mean(dv**2)))


def evaluate_run(tracks, truth, tolerance: float = DEFAULT_TOLERANCE) -> RunRmse:
    pairs = align(tracks, truth, tolerance)
    r, v = compute_rmse(pairs)
    return RunRmse(r, v, len(pairs))


def _mean_std(x: np.ndarray) -> tuple[float, float]:
    # identical runs must give exactly (value, 0), free of rounding in the mean
    if np.all(x == x[0]):
        return float(x[0]), 0.0
    return float(x.mean()), float(x.std())


def _pooled(x: np.ndarray, w: np.ndarray) -> float:
    if np.all(x == x[0]):
        return float(x[0])
    return float(np.sqrt(np.sum(w * x**2) / w.sum()))


def summarize_runs(runs: Sequence) -> RmseReport:
    """Aggregate per-run ``(range_rmse, velocity_rmse[, sample_count])`` results."""
    if not runs:
        raise ValueError("need at least one run")
    runs = [RunRmse(*r) for r in runs]
    r = np.array([x.range_rmse for x in runs], float)
    v = np.array([x.velocity_rmse for x in runs], float)
    n = np.array([x.sample_count for x in runs], float)
    # pooled RMSE weights runs by sample count; without counts, equally
    w = n if n.sum() > 0 else np.ones_like(n)
    r_mean, r_std = _mean_std(r)
    v_mean, v_std = _mean_std(v)
    return RmseReport(
        range_rmse=_pooled(r, w),
        velocity_rmse=_pooled(v, w),
        range_rmse_mean=r_mean,
        range_rmse_std=r_std,
        velocity_rmse_mean=v_mean,
        velocity_rmse_std=v_std,
        range_rmse_per_run=[float(x) for x in r],
        velocity_rmse_per_run=[float(x) for x in v],
        sample_count_per_run=[int(x) for x in n],
        sample_count=int(n.sum()),
    )


def export_report(report: RmseReport) -> str:
    """Deterministic JSON text of the report (sorted keys, LF newlines)."""
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def load_report(text: str) -> RmseReport:
    return RmseReport.from_dict(json.loads(text))
