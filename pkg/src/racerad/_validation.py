"""Input checking shared by the estimators."""
from __future__ import annotations

import numpy as np

from .config import RadarConfig


def check_config(config) -> RadarConfig:
    if config is None:
        config = RadarConfig()
    elif isinstance(config, dict):
        config = RadarConfig.from_dict(config)
    elif not isinstance(config, RadarConfig):
        raise TypeError(f"expected RadarConfig, got {type(config).__name__}")
    return config.validate()


def check_frames(X, config: RadarConfig) -> np.ndarray:
    """Coerce frames to a (n_frames, chirps, samples) finite array.

    Accepts a single matrix, a stacked array, or a sequence of objects with
    a ``samples`` attribute.
    """
    if isinstance(X, (list, tuple)) and X and hasattr(X[0], "samples"):
        X = [f.samples for f in X]
    dtype = complex if config.adc_mode == "complex" else float
    arr = np.asarray(X)
    if np.iscomplexobj(arr) and config.adc_mode == "real":
        raise ValueError("complex samples given for a real-mode config")
    arr = arr.astype(dtype, copy=False)
    if arr.ndim == 2:
        arr = arr[None]
    expected = (config.chirps_per_frame, config.samples_per_chirp)
    if arr.ndim != 3 or arr.shape[1:] != expected:
        raise ValueError(f"frames must have shape (n, {expected[0]}, {expected[1]}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("frames contain non-finite samples")
    return arr


def check_maps(X, n_rows: int, n_cols: int) -> np.ndarray:
    if isinstance(X, (list, tuple)) and X and hasattr(X[0], "magnitude"):
        X = [m.magnitude for m in X]
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1:] != (n_rows, n_cols):
        raise ValueError(f"maps must have shape (n, {n_rows}, {n_cols}), got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError("map magnitudes must be finite and non-negative")
    return arr
