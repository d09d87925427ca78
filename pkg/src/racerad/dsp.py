"""Raw frame -> range-doppler magnitude map.

Chain: per-chirp DC removal, Hanning window on both axes, zero padding on
both axes, range FFT along fast time, Doppler FFT along slow time with the
zero-velocity row moved to index ``zero_pad_size // 2``, magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_frames
from .config import RadarConfig


@dataclass
class RangeDopplerMap:
    """Doppler rows x range columns magnitude map with its physical axes."""

    magnitude: np.ndarray
    complex_spectrum: np.ndarray
    range_axis: np.ndarray
    velocity_axis: np.ndarray
    timestamp: float = 0.0
    frame_index: int = 0

    @property
    def shape(self):
        return self.magnitude.shape


def dc_removal(samples: np.ndarray) -> np.ndarray:
    """Subtract each chirp's (row's) mean."""
    samples = np.asarray(samples)
    return samples - samples.mean(axis=-1, keepdims=True)


def hanning(length: int) -> np.ndarray:
    # symmetric taps 0.5 * (1 - cos(2 pi k / (L - 1))); L == 1 gives [1]
    return np.hanning(length)


def apply_window(samples: np.ndarray) -> np.ndarray:
    """Hanning taper along fast time (columns) and then slow time (rows)."""
    samples = np.asarray(samples)
    n_chirps, n_samples = samples.shape[-2:]
    return samples * hanning(n_samples)[None, :] * hanning(n_chirps)[:, None]


def zero_pad(samples: np.ndarray, size: int) -> np.ndarray:
    """Embed at the origin of a ``size`` x ``size`` zero matrix."""
    samples = np.asarray(samples)
    rows, cols = samples.shape[-2:]
    if rows > size or cols > size:
        raise ValueError(f"frame {rows}x{cols} does not fit in pad size {size}")
    out = np.zeros(samples.shape[:-2] + (size, size), dtype=np.result_type(samples, float))
    out[..., :rows, :cols] = samples
    return out


def range_spectrum(padded: np.ndarray, adc_mode: str = "real") -> np.ndarray:
    """FFT along fast time; real sampling keeps the non-negative half."""
    spectrum = np.fft.fft(padded, axis=-1)
    if adc_mode == "real":
        spectrum = spectrum[..., : padded.shape[-1] // 2]
    return spectrum


def doppler_spectrum(range_spec: np.ndarray) -> np.ndarray:
    """FFT along slow time, rotated so zero velocity lands on the center row."""
    return np.fft.fftshift(np.fft.fft(range_spec, axis=-2), axes=-2)


def complex_range_doppler(config: RadarConfig, samples: np.ndarray) -> np.ndarray:
    """Pre-magnitude spectrum; ``samples`` may carry leading batch axes."""
    x = apply_window(dc_removal(samples))
    x = zero_pad(x, config.zero_pad_size)
    return doppler_spectrum(range_spectrum(x, config.adc_mode))


def process_frame(config: RadarConfig, frame) -> RangeDopplerMap:
    """Full chain for one :class:`~racerad.scene.RawFrame` (or bare sample matrix)."""
    samples = getattr(frame, "samples", frame)
    samples = check_frames(samples, config)[0]
    spectrum = complex_range_doppler(config, samples)
    return RangeDopplerMap(
        magnitude=np.abs(spectrum),
        complex_spectrum=spectrum,
        range_axis=config.range_axis,
        velocity_axis=config.velocity_axis,
        timestamp=float(getattr(frame, "timestamp", 0.0)),
        frame_index=int(getattr(frame, "frame_index", 0)),
    )


def magnitude_db(rd_map, floor_db: float = -60.0) -> np.ndarray:
    """20 log10 of the map normalized to its maximum, clamped at ``floor_db``."""
    if not floor_db < 0:
        raise ValueError("floor_db must be negative")
    mag = np.asarray(getattr(rd_map, "magnitude", rd_map), float)
    peak = mag.max() if mag.size else 0.0
    if peak <= 0:
        return np.full(mag.shape, float(floor_db))
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    return np.maximum(db, floor_db)
