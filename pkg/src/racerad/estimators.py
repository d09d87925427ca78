"""sklearn-compatible estimators wrapping the processing and tracking stages.

Both follow the usual contract (hyper-parameters in ``__init__``, fitted
state in trailing-underscore attributes) so they compose with
:class:`sklearn.pipeline.Pipeline`, ``clone`` and ``get_params``::

    pipe = make_pipeline(RangeDopplerProcessor(cfg), MaxEnergyTracker(cfg))
    estimates = pipe.fit(frames).predict(frames)   # (n_frames, 2)
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_config, check_frames, check_maps
from .detect import DetectorOptions, TrackPoint, bins_to_physical, detect_peak, track_run
from .dsp import RangeDopplerMap, complex_range_doppler, process_frame


class RangeDopplerProcessor(TransformerMixin, BaseEstimator):
    """Transformer turning raw beat frames into range-doppler magnitude maps.

    ``transform`` maps an array of shape (n_frames, chirps, samples) to
    magnitudes of shape (n_frames, zero_pad_size, n_range_bins), so the
    processor can sit in an sklearn :class:`~sklearn.pipeline.Pipeline`
    in front of :class:`MaxEnergyTracker`.

    Parameters
    ----------
    config : RadarConfig, optional
        Radar parameterization; defaults to the racing-sensor setup.
    """

    def __init__(self, config=None):
        self.config = config

    def fit(self, X=None, y=None):
        self.config_ = check_config(self.config)
        self.range_axis_ = self.config_.range_axis
        self.velocity_axis_ = self.config_.velocity_axis
        if X is not None:
            check_frames(X, self.config_)
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        samples = check_frames(X, self.config_)
        return np.abs(complex_range_doppler(self.config_, samples))

    def process(self, frames) -> list[RangeDopplerMap]:
        """Like ``transform`` but keeps timestamps and axes per frame."""
        check_is_fitted(self, "config_")
        return [process_frame(self.config_, f) for f in frames]


class MaxEnergyTracker(BaseEstimator):
    """Per-frame max-energy tracker over range-doppler maps.

    ``predict`` returns an (n_frames, 2) array of [range m, velocity m/s];
    ``track`` returns :class:`TrackPoint` records with range gating.
    """

    def __init__(self, config=None, exclude_zero_doppler_rows=1, min_range_bins=2,
                 parabolic_interpolation=False):
        self.config = config
        self.exclude_zero_doppler_rows = exclude_zero_doppler_rows
        self.min_range_bins = min_range_bins
        self.parabolic_interpolation = parabolic_interpolation

    def fit(self, X=None, y=None):
        self.config_ = check_config(self.config)
        self.options_ = DetectorOptions(
            int(self.exclude_zero_doppler_rows),
            int(self.min_range_bins),
            bool(self.parabolic_interpolation),
        ).check(self.config_.zero_pad_size, self.config_.n_range_bins)
        return self

    def _maps(self, X):
        check_is_fitted(self, "options_")
        return check_maps(X, self.config_.zero_pad_size, self.config_.n_range_bins)

    def predict(self, X) -> np.ndarray:
        out = np.empty((0, 2))
        pts = [self._estimate(m) for m in self._maps(X)]
        return np.asarray(pts, float).reshape(-1, 2) if pts else out

    def _estimate(self, mag):
        row, col, _ = detect_peak(mag, self.options_)
        return bins_to_physical(mag, row, col, self.options_,
                                self.config_.range_axis, self.config_.velocity_axis)

    def track(self, maps) -> list[TrackPoint]:
        check_is_fitted(self, "options_")
        if not isinstance(maps, (list, tuple)) or (maps and not hasattr(maps[0], "magnitude")):
            mags = self._maps(maps)
            return track_run(list(mags), self.options_, self.config_)
        return track_run(maps, self.options_, self.config_)
