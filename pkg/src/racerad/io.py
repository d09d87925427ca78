"""File formats: binary frame logs, CSV tables, map images.

Frame log layout (little-endian)::

    magic      4s   b"FMRD"
    version    u16
    f_low, bandwidth, sample_rate, chirp_interval, frame_rate   5 x f64
    samples_per_chirp, chirps_per_frame, zero_pad_size          3 x u32
    adc_mode   u8   0 = real, 1 = complex
    n_frames   u32
    then per frame: timestamp f64, chirps x samples f32 row-major
    (complex mode interleaves re, im per sample)
"""
from __future__ import annotations

import csv
import io
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from .config import RadarConfig
from .detect import TrackPoint
from .dsp import magnitude_db
from .scene import GroundTruthPoint, RawFrame

MAGIC = b"FMRD"
VERSION = 1
_HEADER = struct.Struct("<4sH5d3IBI")
_TIMESTAMP = struct.Struct("<d")
_ADC_CODES = {"real": 0, "complex": 1}

TRUTH_HEADER = ["timestamp_s", "range_m", "radial_velocity_mps", "in_range"]
TRACK_HEADER = ["timestamp_s", "range_m", "radial_velocity_mps", "peak_magnitude", "in_range"]
ODOMETRY_HEADER = ["timestamp_s", "speed_mps"]


class FormatError(ValueError):
    """A file does not follow its declared format."""


class FrameLogError(FormatError):
    """Malformed frame log; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at byte offset {offset})")


def _frame_dtype(config: RadarConfig):
    return np.dtype("<c8") if config.adc_mode == "complex" else np.dtype("<f4")


def encode_frame_log(config: RadarConfig, frames) -> bytes:
    config.validate()
    shape = (config.chirps_per_frame, config.samples_per_chirp)
    dtype = _frame_dtype(config)
    parts = [_HEADER.pack(
        MAGIC, VERSION, config.f_low, config.bandwidth, config.sample_rate,
        config.chirp_interval, config.frame_rate, config.samples_per_chirp,
        config.chirps_per_frame, config.zero_pad_size, _ADC_CODES[config.adc_mode],
        len(frames),
    )]
    for f in frames:
        samples = np.asarray(f.samples)
        if samples.shape != shape:
            raise ValueError(f"frame {f.frame_index} has shape {samples.shape}, expected {shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError(f"frame {f.frame_index} has non-finite samples")
        parts.append(_TIMESTAMP.pack(f.timestamp))
        parts.append(np.ascontiguousarray(samples, dtype=dtype).tobytes())
    return b"".join(parts)


def decode_frame_log(data: bytes):
    if len(data) < _HEADER.size:
        raise FrameLogError("truncated header", len(data))
    (magic, version, f_low, bw, fs, ts, fr, ns, nc, pad, mode, count) = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FrameLogError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FrameLogError(f"unsupported version {version}", 4)
    modes = {v: k for k, v in _ADC_CODES.items()}
    if mode not in modes:
        raise FrameLogError(f"bad adc mode code {mode}", _HEADER.size - 5)
    config = RadarConfig(f_low, bw, fs, ns, nc, ts, fr, pad, modes[mode])
    bad = config.violations()
    if bad:
        raise FrameLogError("invalid config in header: " + "; ".join(bad), 6)

    dtype = _frame_dtype(config)
    n_bytes = nc * ns * dtype.itemsize
    offset = _HEADER.size
    frames = []
    for i in range(count):
        if offset + _TIMESTAMP.size + n_bytes > len(data):
            raise FrameLogError(f"truncated frame {i} of {count}", offset)
        (stamp,) = _TIMESTAMP.unpack_from(data, offset)
        offset += _TIMESTAMP.size
        samples = np.frombuffer(data, dtype=dtype, count=nc * ns, offset=offset)
        frames.append(RawFrame(samples.reshape(nc, ns).copy(), stamp, i))
        offset += n_bytes
    if offset != len(data):
        raise FrameLogError(f"{len(data) - offset} trailing bytes after {count} frames", offset)
    return config, frames


def write_frame_log(path, config: RadarConfig, frames) -> None:
    Path(path).write_bytes(encode_frame_log(config, frames))


def read_frame_log(path):
    """Return ``(config, frames)``; raises :class:`FrameLogError` on corruption."""
    return decode_frame_log(Path(path).read_bytes())


# ---------------------------------------------------------------------- #
# CSV
# ---------------------------------------------------------------------- #
def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _parse_flag(s: str) -> bool:
    s = s.strip().lower()
    if s in ("true", "1", "yes"):
        return True
    if s in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean flag: {s!r}")


def _write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    Path(path).write_text(buf.getvalue(), newline="")


def _read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise FormatError(f"{path}: empty CSV")
    width = len(rows[0])
    for i, r in enumerate(rows[1:], start=2):
        if len(r) != width:
            raise FormatError(f"{path}: line {i} has {len(r)} fields, expected {width}")
    return [h.strip() for h in rows[0]], rows[1:]


def _parse_rows(path, rows, parse):
    out = []
    for i, r in enumerate(rows, start=2):
        try:
            out.append(parse(r))
        except ValueError as e:
            raise FormatError(f"{path}: line {i}: {e}") from None
    return out


def write_truth_csv(path, truth) -> None:
    _write_csv(path, TRUTH_HEADER, (
        [_fmt(g.timestamp), _fmt(g.range), _fmt(g.radial_velocity), _flag(g.in_range)]
        for g in truth))


def write_track_csv(path, tracks) -> None:
    _write_csv(path, TRACK_HEADER, (
        [_fmt(p.timestamp), _fmt(p.range), _fmt(p.radial_velocity),
         _fmt(p.peak_magnitude), _flag(p.in_range)]
        for p in tracks))


def read_track_csv(path) -> list[TrackPoint]:
    header, rows = _read_csv(path)
    if header != TRACK_HEADER:
        raise FormatError(f"{path}: expected header {','.join(TRACK_HEADER)}")
    return _parse_rows(path, rows, lambda r: TrackPoint(
        float(r[0]), float(r[1]), float(r[2]), float(r[3]), _parse_flag(r[4])))


def odometry_to_truth(timestamps, speeds, ranges=None, initial_distance: float = 0.0,
                      max_range: Optional[float] = None) -> list[GroundTruthPoint]:
    """Truth from the lead car's odometry.

    Without logged ranges, range is ``initial_distance`` plus the trapezoidal
    integral of speed. The radar car is stationary, so speed is the radial
    velocity.
    """
    t = np.asarray(timestamps, float)
    v = np.asarray(speeds, float)
    if ranges is None:
        steps = np.diff(t) * 0.5 * (v[1:] + v[:-1])
        r = initial_distance + np.concatenate([[0.0], np.cumsum(steps)])
    else:
        r = np.asarray(ranges, float)
    limit = np.inf if max_range is None else max_range
    return [GroundTruthPoint(float(a), float(b), float(c), bool(b <= limit))
            for a, b, c in zip(t, r, v)]


def read_truth_csv(path, initial_distance: float = 0.0,
                   max_range: Optional[float] = None) -> list[GroundTruthPoint]:
    """Ground truth from either a simulator truth CSV or an odometry CSV."""
    header, rows = _read_csv(path)
    if header == TRUTH_HEADER:
        return _parse_rows(path, rows, lambda r: GroundTruthPoint(
            float(r[0]), float(r[1]), float(r[2]), _parse_flag(r[3])))
    if header[:2] == ODOMETRY_HEADER and header[2:] in ([], ["range_m"]):
        vals = _parse_rows(path, rows, lambda r: [float(x) for x in r])
        cols = list(zip(*vals)) if vals else [(), (), ()]
        ranges = cols[2] if len(header) == 3 else None
        return odometry_to_truth(cols[0], cols[1], ranges, initial_distance, max_range)
    raise FormatError(f"{path}: unrecognized truth header {','.join(header)}")


# ---------------------------------------------------------------------- #
# map export
# ---------------------------------------------------------------------- #
def write_map_csv(path, rd_map) -> None:
    """Row-major magnitudes; first row carries the range axis, first column velocity."""
    rows = [["velocity_mps\\range_m"] + [_fmt(r) for r in rd_map.range_axis]]
    for v, line in zip(rd_map.velocity_axis, rd_map.magnitude):
        rows.append([_fmt(v)] + [_fmt(x) for x in line])
    _write_csv(path, rows[0], rows[1:])


def read_map_csv(path):
    """Return ``(range_axis, velocity_axis, magnitude)`` from :func:`write_map_csv` output."""
    header, rows = _read_csv(path)
    ranges = np.array([float(x) for x in header[1:]])
    vel = np.array([float(r[0]) for r in rows])
    mag = np.array([[float(x) for x in r[1:]] for r in rows])
    return ranges, vel, mag


def pgm_bytes(rd_map, floor_db: float = -60.0) -> bytes:
    """8-bit binary PGM of the dB map, ``floor_db`` -> 0 and 0 dB -> 255."""
    db = magnitude_db(rd_map, floor_db)
    px = np.rint((db - floor_db) / (-floor_db) * 255.0).clip(0, 255).astype(np.uint8)
    h, w = px.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + px.tobytes()


def write_map_pgm(path, rd_map, floor_db: float = -60.0) -> None:
    Path(path).write_bytes(pgm_bytes(rd_map, floor_db))
