"""Radar parameterization and the closed-form quantities derived from it."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s

ADC_MODES = ("real", "complex")


class ConfigError(ValueError):
    """Raised when a radar configuration violates one of its invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid radar config: " + "; ".join(self.violations))


@dataclass(frozen=True)
class RadarConfig:
    """FMCW chirp/frame timing and RF parameters, SI units throughout.

    The default values reproduce the configuration of the low-power 60 GHz
    sensor used on the racing platform: 64 chirps of 64 samples at 2 MHz,
    20 Hz frames, both FFT axes zero-padded to 256.
    """

    f_low: float = 60e9  # chirp start frequency [Hz]
    bandwidth: float = 1.296864e9  # f_high - f_low [Hz]
    sample_rate: float = 2e6  # ADC rate [Hz]
    samples_per_chirp: int = 64
    chirps_per_frame: int = 64
    chirp_interval: float = 156.25e-6  # chirp start to chirp start [s]
    frame_rate: float = 20.0  # [Hz]
    zero_pad_size: int = 256
    adc_mode: str = "real"

    # ------------------------------------------------------------------ #
    # validation
    # ------------------------------------------------------------------ #
    def violations(self) -> list[str]:
        """Every violated invariant, empty iff the config is usable."""
        out = []
        if not self.f_low > 0:
            out.append("f_low > 0")
        if not self.bandwidth > 0:
            out.append("bandwidth > 0")
        if not self.sample_rate > 0:
            out.append("sample_rate > 0")
        if self.samples_per_chirp < 1:
            out.append("samples_per_chirp >= 1")
        if self.chirps_per_frame < 1:
            out.append("chirps_per_frame >= 1")
        if not self.chirp_interval > 0:
            out.append("chirp_interval > 0")
        if not self.frame_rate > 0:
            out.append("frame_rate > 0")
        if self.adc_mode not in ADC_MODES:
            out.append(f"adc_mode in {ADC_MODES}")
        if self.sample_rate > 0 and self.chirp_interval > 0:
            if self.samples_per_chirp / self.sample_rate > self.chirp_interval:
                out.append("T_c <= T_s")
        if self.frame_rate > 0 and self.chirp_interval > 0:
            if self.chirps_per_frame * self.chirp_interval > 1.0 / self.frame_rate:
                out.append("chirps_per_frame * T_s <= 1 / frame_rate")
        if self.zero_pad_size < self.samples_per_chirp:
            out.append("zero_pad_size >= samples_per_chirp")
        if self.zero_pad_size < self.chirps_per_frame:
            out.append("zero_pad_size >= chirps_per_frame")
        if self.zero_pad_size % 2:
            out.append("zero_pad_size even")
        return out

    def validate(self) -> "RadarConfig":
        """Return self, raising :class:`ConfigError` listing all violations."""
        v = self.violations()
        if v:
            raise ConfigError(v)
        return self

    # ------------------------------------------------------------------ #
    # derived quantities
    # ------------------------------------------------------------------ #
    @property
    def chirp_duration(self) -> float:
        """Active chirp duration T_c [s]."""
        return self.samples_per_chirp / self.sample_rate

    @property
    def f_high(self) -> float:
        return self.f_low + self.bandwidth

    @property
    def slope(self) -> float:
        """Chirp slope S [Hz/s]."""
        return self.bandwidth / self.chirp_duration

    @property
    def wavelength(self) -> float:
        """Doppler carrier wavelength [m]; the carrier is f_low."""
        return SPEED_OF_LIGHT / self.f_low

    @property
    def range_resolution(self) -> float:
        return SPEED_OF_LIGHT / (2.0 * self.bandwidth)

    @property
    def max_range(self) -> float:
        """Range whose beat frequency sits on the ADC Nyquist limit [m]."""
        nyquist = 4.0 if self.adc_mode == "real" else 2.0
        return SPEED_OF_LIGHT * self.sample_rate / (nyquist * self.slope)

    @property
    def max_velocity(self) -> float:
        return self.wavelength / (4.0 * self.chirp_interval)

    @property
    def velocity_resolution(self) -> float:
        return self.wavelength / (2.0 * self.chirp_interval * self.chirps_per_frame)

    @property
    def n_range_bins(self) -> int:
        return self.zero_pad_size // 2 if self.adc_mode == "real" else self.zero_pad_size

    @property
    def range_bin_spacing(self) -> float:
        return self.max_range / self.n_range_bins

    @property
    def velocity_bin_spacing(self) -> float:
        return 2.0 * self.max_velocity / self.zero_pad_size

    @cached_property
    def range_axis(self) -> np.ndarray:
        ax = np.arange(self.n_range_bins) * self.range_bin_spacing
        ax.setflags(write=False)
        return ax

    @cached_property
    def velocity_axis(self) -> np.ndarray:
        half = self.zero_pad_size // 2
        ax = (np.arange(self.zero_pad_size) - half) * self.velocity_bin_spacing
        ax.setflags(write=False)
        return ax

    def summary(self) -> dict[str, float]:
        """Derived parameters keyed with their units, as printed by ``info``."""
        return {
            "chirp_duration_s": self.chirp_duration,
            "slope_hz_per_s": self.slope,
            "wavelength_m": self.wavelength,
            "range_resolution_m": self.range_resolution,
            "max_range_m": self.max_range,
            "max_velocity_mps": self.max_velocity,
            "velocity_resolution_mps": self.velocity_resolution,
            "range_bin_spacing_m": self.range_bin_spacing,
            "velocity_bin_spacing_mps": self.velocity_bin_spacing,
            "range_bins": self.n_range_bins,
            "doppler_bins": self.zero_pad_size,
        }

    # ------------------------------------------------------------------ #
    # serialization
    # ------------------------------------------------------------------ #
    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RadarConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError([f"unknown field {k!r}" for k in sorted(unknown)])
        kw = dict(d)
        for k in ("samples_per_chirp", "chirps_per_frame", "zero_pad_size"):
            if k in kw:
                if float(kw[k]) != int(kw[k]):
                    raise ConfigError([f"{k} must be an integer"])
                kw[k] = int(kw[k])
        for k in ("f_low", "bandwidth", "sample_rate", "chirp_interval", "frame_rate"):
            if k in kw:
                kw[k] = float(kw[k])
        return cls(**kw)

    @classmethod
    def from_json(cls, path) -> "RadarConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def validate(config: RadarConfig) -> list[str]:
    return config.violations()


def chirp_slope(config: RadarConfig) -> float:
    return config.slope


def wavelength(config: RadarConfig) -> float:
    return config.wavelength


def range_resolution(config: RadarConfig) -> float:
    return config.range_resolution


def max_range(config: RadarConfig) -> float:
    return config.max_range


def max_velocity(config: RadarConfig) -> float:
    return config.max_velocity


def velocity_resolution(config: RadarConfig) -> float:
    return config.velocity_resolution


def angular_resolution(antenna_count: int) -> float:
    """Angular resolution [rad] of a uniform array of ``antenna_count`` elements."""
    if antenna_count < 1:
        raise ValueError("antenna_count must be >= 1")
    return 2.0 / antenna_count


def range_axis(config: RadarConfig) -> np.ndarray:
    return config.range_axis


def velocity_axis(config: RadarConfig) -> np.ndarray:
    return config.velocity_axis
