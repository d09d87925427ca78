"""Beat-signal synthesis for point scatterers seen from a moving ego vehicle.

Coordinates are in the ego frame: ``x`` lateral, ``y`` along boresight.
The world frame coincides with the ego frame at scene time zero; the ego
only translates along +y. Radial velocity is positive when receding.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import SPEED_OF_LIGHT, RadarConfig

SCATTERER_KINDS = ("target", "boundary", "ground")
MIN_AMPLITUDE_RANGE = 0.05  # m, clamp for the 1/d^2 amplitude law
SYNTHESIS_RANGE_FACTOR = 1.5  # scatterers beyond this * max_range are dropped


@dataclass(frozen=True)
class Scatterer:
    """A point reflector.

    ``position`` is in the ego frame at scene time zero, ``velocity`` and
    ``acceleration`` in the world frame. ``max_speed`` caps the world speed
    reached under acceleration. Ground scatterers stay anchored to the ego
    frame (there is always ground at the same relative spot) while keeping
    zero world velocity, so they show the Doppler of static ground.
    """

    position: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)
    amplitude: float = 1.0
    kind: str = "target"
    acceleration: tuple[float, float] = (0.0, 0.0)
    max_speed: Optional[float] = None

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.kind not in SCATTERER_KINDS:
            raise ValueError(f"kind must be one of {SCATTERER_KINDS}")

    def _accel_end(self) -> float:
        """Time at which the speed cap is hit (inf if never)."""
        a = np.asarray(self.acceleration, float)
        aa = a @ a
        if aa == 0.0 or self.max_speed is None:
            return math.inf
        v0 = np.asarray(self.velocity, float)
        c = v0 @ v0 - self.max_speed**2
        if c >= 0:
            return 0.0
        b = 2.0 * (v0 @ a)
        return (-b + math.sqrt(b * b - 4 * aa * c)) / (2 * aa)

    def world_state(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """World-frame (position, velocity) at time ``t``."""
        p0 = np.asarray(self.position, float)
        v0 = np.asarray(self.velocity, float)
        if self.kind == "ground":
            return p0, np.zeros(2)
        a = np.asarray(self.acceleration, float)
        tc = min(t, self._accel_end())
        p = p0 + v0 * tc + 0.5 * a * tc * tc
        v = v0 + a * tc
        if t > tc:
            p = p + v * (t - tc)
        return p, v

    def at(self, t: float, ego_displacement: float = 0.0) -> "Scatterer":
        """The scatterer propagated to time ``t``, in the ego frame."""
        p, v = self.world_state(t)
        if self.kind != "ground":
            p = p - np.array([0.0, ego_displacement])
        return replace(
            self,
            position=(float(p[0]), float(p[1])),
            velocity=(float(v[0]), float(v[1])),
            acceleration=(0.0, 0.0),
            max_speed=None,
        )


@dataclass(frozen=True)
class BoundaryWalls:
    offsets: tuple[float, float] = (-1.0, 1.0)  # lateral positions [m]
    spacing: float = 0.25  # between scatterers along a wall [m]
    extent: float = 10.0  # wall length ahead of the start position [m]
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("wall spacing must be > 0")


@dataclass(frozen=True)
class GroundClutter:
    count: int = 0
    max_range: float = 0.5  # m
    amplitude: float = 0.05
    half_angle_deg: float = 60.0


@dataclass(frozen=True)
class Scenario:
    """Geometric scene description; see the ``configs/`` directory for JSON."""

    duration: float
    ego_speed: tuple[tuple[float, float], ...] = ((0.0, 0.0),)
    targets: tuple[Scatterer, ...] = ()
    boundary_walls: Optional[BoundaryWalls] = None
    ground_clutter: Optional[GroundClutter] = None
    noise_std: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be > 0")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        knots = tuple((float(t), float(v)) for t, v in self.ego_speed)
        if not knots:
            raise ValueError("ego_speed needs at least one (time, speed) point")
        if any(b[0] <= a[0] for a, b in zip(knots, knots[1:])):
            raise ValueError("ego_speed times must be strictly increasing")
        object.__setattr__(self, "ego_speed", knots)
        object.__setattr__(self, "targets", tuple(self.targets))

    # piecewise-linear ego speed, held constant outside the knots
    def ego_speed_at(self, t: float) -> float:
        ts, vs = zip(*self.ego_speed)
        return float(np.interp(t, ts, vs))

    def ego_displacement(self, t: float) -> float:
        ts, vs = (list(x) for x in zip(*self.ego_speed))
        if t <= ts[0]:
            return vs[0] * t
        # integrate from 0: constant vs[0] before the first knot
        total = vs[0] * ts[0]
        for i in range(len(ts) - 1):
            t0, t1 = ts[i], ts[i + 1]
            if t <= t0:
                break
            te = min(t, t1)
            ve = vs[i] + (vs[i + 1] - vs[i]) * (te - t0) / (t1 - t0)
            total += 0.5 * (vs[i] + ve) * (te - t0)
        if t > ts[-1]:
            total += vs[-1] * (t - ts[-1])
        return total

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, rng_seed=seed)

    # ------------------------------------------------------------------ #
    def to_dict(self) -> dict:
        d = asdict(self)
        d["ego_speed"] = [list(k) for k in self.ego_speed]
        for t in d["targets"]:
            for k in ("position", "velocity", "acceleration"):
                t[k] = list(t[k])
        if d["boundary_walls"] is not None:
            d["boundary_walls"]["offsets"] = list(d["boundary_walls"]["offsets"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        d = dict(d)
        ego = d.pop("ego_speed", 0.0)
        if isinstance(ego, (int, float)):
            ego = [(0.0, float(ego))]
        targets = [
            Scatterer(
                position=tuple(t["position"]),
                velocity=tuple(t.get("velocity", (0.0, 0.0))),
                amplitude=float(t.get("amplitude", 1.0)),
                kind=t.get("kind", "target"),
                acceleration=tuple(t.get("acceleration", (0.0, 0.0))),
                max_speed=t.get("max_speed"),
            )
            for t in d.pop("targets", [])
        ]
        walls = d.pop("boundary_walls", None)
        if walls is not None:
            walls = dict(walls)
            if "offsets" in walls:
                walls["offsets"] = tuple(walls["offsets"])
            walls = BoundaryWalls(**walls)
        ground = d.pop("ground_clutter", None)
        if ground is not None:
            ground = GroundClutter(**ground)
        return cls(
            ego_speed=tuple(tuple(k) for k in ego),
            targets=tuple(targets),
            boundary_walls=walls,
            ground_clutter=ground,
            **d,
        )

    @classmethod
    def from_json(cls, path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


@dataclass
class RawFrame:
    samples: np.ndarray  # chirps x samples
    timestamp: float
    frame_index: int


@dataclass(frozen=True)
class GroundTruthPoint:
    timestamp: float
    range: float
    radial_velocity: float
    in_range: bool


# ---------------------------------------------------------------------- #
# geometry
# ---------------------------------------------------------------------- #
def radial_geometry(scatterer: Scatterer, ego_speed: float, t: float = 0.0,
                    ego_displacement: float = 0.0) -> tuple[float, float, float]:
    """(range, radial velocity, angle off boresight) seen from the ego radar.

    For a static world point this gives ``-ego_speed * cos(angle)``.
    """
    s = scatterer.at(t, ego_displacement)
    x, y = s.position
    r = math.hypot(x, y)
    vx, vy = s.velocity[0], s.velocity[1] - ego_speed
    vr = (vx * x + vy * y) / r if r > 0 else 0.0
    return r, vr, math.atan2(x, y)


def _geometry_arrays(scatterers: Sequence[Scatterer], ego_speed: float):
    if not scatterers:
        z = np.zeros(0)
        return z, z, z, z
    pos = np.array([s.position for s in scatterers], float)
    vel = np.array([s.velocity for s in scatterers], float)
    amp = np.array([s.amplitude for s in scatterers], float)
    vel[:, 1] -= ego_speed
    r = np.hypot(pos[:, 0], pos[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        vr = np.where(r > 0, np.einsum("ij,ij->i", vel, pos) / r, 0.0)
    return r, vr, amp, pos[:, 1]


# ---------------------------------------------------------------------- #
# beat signal
# ---------------------------------------------------------------------- #
def amplitude_at(amplitude, rng):
    """Received amplitude under the 1/d^2 law, clamped near zero range."""
    return amplitude / np.maximum(rng, MIN_AMPLITUDE_RANGE) ** 2


def beat_sample(config: RadarConfig, range_m: float, radial_velocity: float,
                amplitude: float, chirp: int, sample: int):
    """One IF sample of a single scatterer.

    The beat frequency uses the frame-start delay (range is taken as
    constant within a frame) while the carrier phase advances with the
    chirp-to-chirp displacement.
    """
    tau0 = 2.0 * range_m / SPEED_OF_LIGHT
    tau_m = 2.0 * (range_m + radial_velocity * chirp * config.chirp_interval) / SPEED_OF_LIGHT
    t_n = sample / config.sample_rate
    phase = 2 * math.pi * config.slope * tau0 * t_n + 2 * math.pi * config.f_low * tau_m
    a = amplitude_at(amplitude, range_m)
    if config.adc_mode == "complex":
        return a * complex(math.cos(phase), math.sin(phase))
    return a * math.cos(phase)


def beat_signal(config: RadarConfig, ranges, radial_velocities, amplitudes) -> np.ndarray:
    """Superposed chirps x samples beat matrix for a set of scatterers."""
    ranges = np.atleast_1d(np.asarray(ranges, float))
    vels = np.atleast_1d(np.asarray(radial_velocities, float))
    amps = amplitude_at(np.atleast_1d(np.asarray(amplitudes, float)), ranges)
    shape = (config.chirps_per_frame, config.samples_per_chirp)
    dtype = complex if config.adc_mode == "complex" else float
    if ranges.size == 0:
        return np.zeros(shape, dtype)

    m = np.arange(config.chirps_per_frame)
    t = np.arange(config.samples_per_chirp) / config.sample_rate
    # fast-time phase (K, 1, Ns) + slow-time carrier phase (K, N, 1)
    fast = 2 * np.pi * config.slope * (2.0 * ranges / SPEED_OF_LIGHT)[:, None, None] * t
    disp = ranges[:, None] + vels[:, None] * m * config.chirp_interval
    slow = (2 * np.pi * config.f_low * 2.0 / SPEED_OF_LIGHT) * disp[:, :, None]
    phase = fast + slow
    if config.adc_mode == "complex":
        sig = np.exp(1j * phase)
    else:
        sig = np.cos(phase)
    return np.einsum("k,kmn->mn", amps, sig)


# ---------------------------------------------------------------------- #
# scene construction
# ---------------------------------------------------------------------- #
def build_track_clutter(scenario: Scenario) -> list[Scatterer]:
    """Static boundary scatterers along both walls plus seeded ground returns."""
    out = []
    walls = scenario.boundary_walls
    if walls is not None:
        n = int(math.floor(walls.extent / walls.spacing + 1e-9)) + 1
        ys = np.arange(n) * walls.spacing
        for x in walls.offsets:
            out.extend(
                Scatterer((float(x), float(y)), amplitude=walls.amplitude, kind="boundary")
                for y in ys
            )
    ground = scenario.ground_clutter
    if ground is not None and ground.count > 0:
        rng = np.random.default_rng([scenario.rng_seed, 0x67726E64])
        r = ground.max_range * np.sqrt(rng.uniform(size=ground.count))
        half = math.radians(ground.half_angle_deg)
        th = rng.uniform(-half, half, size=ground.count)
        out.extend(
            Scatterer((float(ri * math.sin(ti)), float(ri * math.cos(ti))),
                      amplitude=ground.amplitude, kind="ground")
            for ri, ti in zip(r, th)
        )
    return out


def scene_scatterers(scenario: Scenario, clutter: Optional[Sequence[Scatterer]] = None):
    if clutter is None:
        clutter = build_track_clutter(scenario)
    return list(scenario.targets) + list(clutter)


def synthesize_frame(config: RadarConfig, scenario: Scenario, t: float,
                     rng: Optional[np.random.Generator] = None, frame_index: int = 0,
                     clutter: Optional[Sequence[Scatterer]] = None) -> RawFrame:
    """Noisy beat frame of the whole scene at scene time ``t``.

    Scatterers behind the radar (y <= 0) or beyond 1.5 * max_range are
    left out. ``rng`` defaults to a generator seeded from the scenario.
    """
    if rng is None:
        rng = np.random.default_rng(scenario.rng_seed)
    ego_v = scenario.ego_speed_at(t)
    ego_d = scenario.ego_displacement(t)
    now = [s.at(t, ego_d) for s in scene_scatterers(scenario, clutter)]
    r, vr, amp, y = _geometry_arrays(now, ego_v)
    keep = (y > 0) & (r <= SYNTHESIS_RANGE_FACTOR * config.max_range) & (amp > 0)
    samples = beat_signal(config, r[keep], vr[keep], amp[keep])
    if scenario.noise_std > 0:
        shape = samples.shape
        if config.adc_mode == "complex":
            samples = samples + scenario.noise_std * (
                rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        else:
            samples = samples + scenario.noise_std * rng.standard_normal(shape)
    return RawFrame(samples=samples, timestamp=float(t), frame_index=int(frame_index))


def frame_times(config: RadarConfig, duration: float) -> np.ndarray:
    n = math.ceil(duration * config.frame_rate - 1e-9)
    return np.arange(n) / config.frame_rate


def ground_truth(config: RadarConfig, scenario: Scenario, t: float) -> Optional[GroundTruthPoint]:
    """Truth for the first target at time ``t`` (None without targets)."""
    if not scenario.targets:
        return None
    r, vr, _ = radial_geometry(
        scenario.targets[0], scenario.ego_speed_at(t), t, scenario.ego_displacement(t))
    return GroundTruthPoint(float(t), r, vr, bool(r <= config.max_range))


def simulate_run(config: RadarConfig, scenario: Scenario):
    """Frames at the frame rate over the scenario duration, plus first-target truth.

    A single RNG stream seeded with ``scenario.rng_seed`` feeds the noise of
    every frame in order, so a run is reproducible bit for bit.
    """
    config.validate()
    rng = np.random.default_rng(scenario.rng_seed)
    clutter = build_track_clutter(scenario)
    frames, truth = [], []
    for i, t in enumerate(frame_times(config, scenario.duration)):
        t = float(t)
        frames.append(synthesize_frame(config, scenario, t, rng, i, clutter))
        gt = ground_truth(config, scenario, t)
        if gt is not None:
            truth.append(gt)
    return frames, truth


def noise_std_for_snr(amplitude: float, range_m: float, snr_db: float) -> float:
    """Per-sample noise std giving ``snr_db`` against a scatterer's amplitude at ``range_m``."""
    return float(amplitude_at(amplitude, range_m)) / 10 ** (snr_db / 20.0)
