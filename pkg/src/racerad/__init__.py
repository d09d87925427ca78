"""FMCW radar scene simulation, range-doppler processing and tracking evaluation."""
from .config import SPEED_OF_LIGHT, ConfigError, RadarConfig, angular_resolution
from .detect import DetectorOptions, TrackPoint, detect_peak, track_run
from .dsp import RangeDopplerMap, magnitude_db, process_frame
from .evaluate import (AlignedPair, RmseReport, align, compute_rmse, evaluate_run,
                       export_report, summarize_runs)
from .scene import (BoundaryWalls, GroundClutter, GroundTruthPoint, RawFrame, Scatterer,
                    Scenario, build_track_clutter, radial_geometry, simulate_run,
                    synthesize_frame)

__version__ = "0.1.0"

_ESTIMATORS = ("MaxEnergyTracker", "RangeDopplerProcessor")


def __getattr__(name):
    # sklearn is slow to import; load the estimators only when asked for
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "SPEED_OF_LIGHT", "AlignedPair", "BoundaryWalls", "ConfigError", "DetectorOptions",
    "GroundClutter", "GroundTruthPoint", "MaxEnergyTracker", "RadarConfig", "RangeDopplerMap",
    "RangeDopplerProcessor", "RawFrame", "RmseReport", "Scatterer", "Scenario", "TrackPoint",
    "align", "angular_resolution", "build_track_clutter", "compute_rmse", "detect_peak",
    "evaluate_run", "export_report", "magnitude_db", "process_frame", "radial_geometry",
    "simulate_run", "summarize_runs", "synthesize_frame", "track_run",
]
