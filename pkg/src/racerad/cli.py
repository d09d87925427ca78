"""Command-line entry point: ``racerad {info,simulate,process,eval,run}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RadarConfig
from .detect import DetectorOptions, track_run
from .dsp import process_frame
from .evaluate import evaluate_run, export_report, summarize_runs
from .io import (FormatError, read_frame_log, read_track_csv, read_truth_csv,
                 write_frame_log, write_map_csv, write_map_pgm, write_track_csv,
                 write_truth_csv)
from .scene import Scenario, simulate_run

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _ParseError(UsageError):
    """Raised after argparse has already printed usage and the message."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _ParseError(message)


def _load_config(path) -> RadarConfig:
    if path is None:
        return RadarConfig().validate()
    return RadarConfig.from_json(path).validate()


def _run_name(kind: str, k: int, ext: str) -> str:
    return f"{kind}_{k:03d}.{ext}"


def _seeds(scenario: Scenario, seed, runs: int):
    base = scenario.rng_seed if seed is None else seed
    return [base + k for k in range(runs)]


# ---------------------------------------------------------------------- #
def cmd_info(args) -> int:
    cfg = _load_config(args.config)
    rows = [
        ("chirp duration", cfg.chirp_duration * 1e6, "us"),
        ("chirp slope", cfg.slope, "Hz/s"),
        ("wavelength", cfg.wavelength * 1e3, "mm"),
        ("range resolution", cfg.range_resolution, "m"),
        ("max range", cfg.max_range, "m"),
        ("max velocity", cfg.max_velocity, "m/s"),
        ("velocity resolution", cfg.velocity_resolution, "m/s"),
        ("range bin spacing", cfg.range_bin_spacing, "m"),
        ("velocity bin spacing", cfg.velocity_bin_spacing, "m/s"),
        ("range bins", cfg.n_range_bins, ""),
        ("doppler bins", cfg.zero_pad_size, ""),
    ]
    for name, value, unit in rows:
        print(f"{name:<22}{value:>16.6g} {unit}".rstrip())
    return EXIT_OK


def _simulate(cfg, scenario, out: Path, seeds):
    out.mkdir(parents=True, exist_ok=True)
    results = []
    for k, seed in enumerate(seeds):
        frames, truth = simulate_run(cfg, scenario.with_seed(seed))
        write_frame_log(out / _run_name("frames", k, "fmrd"), cfg, frames)
        write_truth_csv(out / _run_name("truth", k, "csv"), truth)
        results.append((frames, truth))
    return results


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    scenario = Scenario.from_json(args.scenario)
    _simulate(cfg, scenario, Path(args.out), _seeds(scenario, args.seed, args.runs))
    return EXIT_OK


def _options(args) -> DetectorOptions:
    return DetectorOptions(args.exclude_zero_doppler, args.min_range_bins, args.interp)


def cmd_process(args) -> int:
    cfg, frames = read_frame_log(args.inp)
    opts = _options(args).check(cfg.zero_pad_size, cfg.n_range_bins)
    formats = {f for f in (args.maps or "").split(",") if f}
    if formats - {"pgm", "csv"}:
        raise UsageError(f"unknown map format(s): {','.join(sorted(formats - {'pgm', 'csv'}))}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    maps = [process_frame(cfg, f) for f in frames]
    write_track_csv(out / "tracks.csv", track_run(maps, opts, cfg))
    if formats:
        (out / "maps").mkdir(exist_ok=True)
    for m in maps:
        stem = out / "maps" / f"frame_{m.frame_index:05d}"
        if "pgm" in formats:
            write_map_pgm(stem.with_suffix(".pgm"), m, args.floor_db)
        if "csv" in formats:
            write_map_csv(stem.with_suffix(".csv"), m)
    return EXIT_OK


def cmd_eval(args) -> int:
    track_files = [p for p in args.tracks.split(",") if p]
    truth_files = [p for p in args.truth.split(",") if p]
    if len(track_files) != len(truth_files):
        raise UsageError("--tracks and --truth need the same number of files")
    max_range = _load_config(args.config).max_range if args.config else None
    runs = []
    for tp, gp in zip(track_files, truth_files):
        tracks = read_track_csv(tp)
        truth = read_truth_csv(gp, args.initial_distance, max_range)
        runs.append(evaluate_run(tracks, truth, args.tolerance_ms / 1000.0))
    Path(args.out).write_text(export_report(summarize_runs(runs)), newline="")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    scenario = Scenario.from_json(args.scenario)
    opts = _options(args).check(cfg.zero_pad_size, cfg.n_range_bins)
    out = Path(args.out)
    runs = []
    for k, (frames, truth) in enumerate(
            _simulate(cfg, scenario, out, _seeds(scenario, args.seed, args.runs))):
        tracks = track_run([process_frame(cfg, f) for f in frames], opts, cfg)
        write_track_csv(out / _run_name("tracks", k, "csv"), tracks)
        runs.append(evaluate_run(tracks, truth, args.tolerance_ms / 1000.0))
    report = export_report(summarize_runs(runs))
    (out / "report.json").write_text(report, newline="")
    sys.stdout.write(report)
    return EXIT_OK


# ---------------------------------------------------------------------- #
def _detector_flags(p):
    p.add_argument("--exclude-zero-doppler", type=int, default=1, metavar="R",
                   help="rows excluded on each side of zero velocity (default 1)")
    p.add_argument("--min-range-bins", type=int, default=2, metavar="C",
                   help="near-range columns excluded from the search (default 2)")
    p.add_argument("--interp", action="store_true", help="parabolic peak refinement")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="racerad", description="FMCW radar simulation and range-doppler tracking")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="print derived radar parameters")
    p.add_argument("--config", metavar="FILE")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("simulate", help="synthesize frame logs and ground truth")
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--scenario", metavar="FILE", required=True)
    p.add_argument("--out", metavar="DIR", required=True)
    p.add_argument("--runs", type=int, default=1, metavar="K")
    p.add_argument("--seed", type=int, metavar="S")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("process", help="range-doppler processing and peak tracking")
    p.add_argument("--in", dest="inp", metavar="FRAMELOG", required=True)
    p.add_argument("--out", metavar="DIR", required=True)
    p.add_argument("--maps", metavar="pgm,csv")
    p.add_argument("--floor-db", type=float, default=-60.0)
    _detector_flags(p)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("eval", help="RMSE of tracks against ground truth")
    p.add_argument("--tracks", metavar="CSV[,CSV...]", required=True)
    p.add_argument("--truth", metavar="CSV[,CSV...]", required=True)
    p.add_argument("--tolerance-ms", type=float, default=25.0, metavar="T")
    p.add_argument("--initial-distance", type=float, default=0.0, metavar="D0",
                   help="start range for odometry files without range_m")
    p.add_argument("--config", metavar="FILE", help="gate odometry truth at this radar's max range")
    p.add_argument("--out", metavar="FILE", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="simulate, process and evaluate in one pass")
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--scenario", metavar="FILE", required=True)
    p.add_argument("--out", metavar="DIR", required=True)
    p.add_argument("--runs", type=int, default=1, metavar="K")
    p.add_argument("--seed", type=int, metavar="S")
    p.add_argument("--tolerance-ms", type=float, default=25.0, metavar="T")
    _detector_flags(p)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "runs", 1) < 1:
            raise UsageError("--runs must be >= 1")
        return args.func(args)
    except _ParseError:
        return EXIT_INVALID
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"racerad: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (FormatError, json.JSONDecodeError, UnicodeDecodeError) as e:
        print(f"racerad: format error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"racerad: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError, TypeError, KeyError) as e:
        print(f"racerad: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
