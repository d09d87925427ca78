"""Max-energy tracking on range-doppler maps."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from .config import RadarConfig


@dataclass(frozen=True)
class DetectorOptions:
    """Search-region and refinement settings.

    ``exclude_zero_doppler_rows`` rows on each side of the zero-velocity row
    are skipped (the zero row itself too, when > 0), as are the first
    ``min_range_bins`` range columns, where ground returns sit.
    """

    exclude_zero_doppler_rows: int = 1
    min_range_bins: int = 2
    parabolic_interpolation: bool = False

    def check(self, n_rows: int, n_cols: int) -> "DetectorOptions":
        if self.exclude_zero_doppler_rows < 0 or self.min_range_bins < 0:
            raise ValueError("exclusion counts must be >= 0")
        if self.exclude_zero_doppler_rows >= n_rows // 2:
            raise ValueError("exclude_zero_doppler_rows must be < half the Doppler rows")
        if self.min_range_bins >= max(n_cols // 2, 1):
            raise ValueError("min_range_bins must be < half the range columns")
        return self


@dataclass(frozen=True)
class TrackPoint:
    timestamp: float
    range: float
    radial_velocity: float
    peak_magnitude: float
    in_range: bool = True


def search_mask(shape, options: DetectorOptions) -> np.ndarray:
    """Boolean mask of the cells the peak search may return."""
    rows, cols = shape
    mask = np.ones(shape, bool)
    mask[:, : options.min_range_bins] = False
    r = options.exclude_zero_doppler_rows
    if r > 0:
        c = rows // 2
        mask[max(c - r, 0): c + r + 1, :] = False
    return mask


def detect_peak(rd_map, options: DetectorOptions = DetectorOptions()):
    """(doppler_row, range_col, magnitude) of the strongest searchable cell.

    Ties go to the smaller range column, then the smaller Doppler row.
    """
    mag = np.asarray(getattr(rd_map, "magnitude", rd_map), float)
    if mag.ndim != 2 or mag.size == 0:
        raise ValueError("map must be a non-empty 2-D array")
    mask = search_mask(mag.shape, options)
    if not mask.any():
        raise ValueError("exclusion zones leave no searchable cell")
    masked = np.where(mask, mag, -np.inf)
    best = masked.max()
    rows, cols = np.nonzero(masked == best)
    i = np.lexsort((rows, cols))[0]
    return int(rows[i]), int(cols[i]), float(mag[rows[i], cols[i]])


def _parabolic_offset(left: float, center: float, right: float) -> float:
    denom = left - 2.0 * center + right
    if denom == 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))


def bins_to_physical(rd_map, doppler_row: int, range_col: int,
                     options: DetectorOptions = DetectorOptions(),
                     range_axis=None, velocity_axis=None):
    """(range m, velocity m/s) of a map cell, optionally refined by a 3-point parabola."""
    mag = np.asarray(getattr(rd_map, "magnitude", rd_map), float)
    if range_axis is None:
        range_axis = rd_map.range_axis
    if velocity_axis is None:
        velocity_axis = rd_map.velocity_axis
    rows, cols = mag.shape
    if not (0 <= doppler_row < rows and 0 <= range_col < cols):
        raise ValueError(f"cell ({doppler_row}, {range_col}) outside {rows}x{cols} map")
    rng = float(range_axis[range_col])
    vel = float(velocity_axis[doppler_row])
    if options.parabolic_interpolation:
        if 0 < range_col < cols - 1:
            d = _parabolic_offset(*mag[doppler_row, range_col - 1: range_col + 2])
            rng += d * (range_axis[1] - range_axis[0])
        if 0 < doppler_row < rows - 1:
            d = _parabolic_offset(*mag[doppler_row - 1: doppler_row + 2, range_col])
            vel += d * (velocity_axis[1] - velocity_axis[0])
    return rng, vel


def gate(point: TrackPoint, config: RadarConfig) -> TrackPoint:
    """Mark the point in range iff it is not beyond the radar's max range."""
    return replace(point, in_range=bool(point.range <= config.max_range))


def track_run(maps, options: DetectorOptions, config: RadarConfig) -> list[TrackPoint]:
    """Independent per-frame peak tracking; no temporal smoothing."""
    out = []
    for m in maps:
        row, col, peak = detect_peak(m, options)
        rng, vel = bins_to_physical(m, row, col, options,
                                    config.range_axis, config.velocity_axis)
        ts = float(getattr(m, "timestamp", 0.0))
        out.append(gate(TrackPoint(ts, rng, vel, peak), config))
    return out
