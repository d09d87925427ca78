import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from oracles import exhaustive_argmax, naive_range_doppler
from racerad import RadarConfig
from racerad.detect import (DetectorOptions, TrackPoint, bins_to_physical, detect_peak, gate,
                            search_mask, track_run)
from racerad.dsp import process_frame
from racerad.scene import Scatterer, Scenario, beat_signal, simulate_run


class TestDetectPeak:
    def test_unique_max(self):
        m = np.zeros((256, 128))
        m[40, 10] = 1.0
        assert detect_peak(m)[:2] == (40, 10)

    def test_tie_prefers_smaller_column(self):
        m = np.zeros((256, 128))
        m[50, 20] = m[60, 10] = 2.0
        assert detect_peak(m)[:2] == (60, 10)

    def test_tie_same_column_prefers_smaller_row(self):
        m = np.zeros((64, 32))
        m[50, 9] = m[5, 9] = 2.0
        assert detect_peak(m)[:2] == (5, 9)

    def test_noiseless_target_matches_oracle(self, cfg):
        x = beat_signal(cfg, [2.0], [1.0], [1.0])
        rd = process_frame(cfg, x)
        ref = np.abs(naive_range_doppler(x, cfg.zero_pad_size))
        allowed = search_mask(ref.shape, DetectorOptions())
        row, col, _ = detect_peak(rd)
        assert (row, col) == exhaustive_argmax(ref, allowed)
        assert col == np.abs(cfg.range_axis - 2.0).argmin()
        assert row == np.abs(cfg.velocity_axis - 1.0).argmin()

    def test_all_excluded(self):
        with pytest.raises(ValueError):
            detect_peak(np.ones((4, 4)), DetectorOptions(exclude_zero_doppler_rows=0, min_range_bins=4))

    def test_empty_map(self):
        with pytest.raises(ValueError):
            detect_peak(np.zeros((0, 0)))

    def test_excluded_peak_is_skipped(self):
        m = np.zeros((16, 16))
        m[8, 5] = 10.0   # zero-velocity row
        m[3, 1] = 9.0    # near-range column
        m[2, 7] = 1.0
        assert detect_peak(m, DetectorOptions(1, 2))[:2] == (2, 7)


class TestOptions:
    @pytest.mark.parametrize("r, c", [(-1, 0), (0, -1), (8, 0), (0, 8)])
    def test_bad_counts(self, r, c):
        with pytest.raises(ValueError):
            DetectorOptions(r, c).check(16, 16)

    def test_mask_counts(self):
        mask = search_mask((256, 128), DetectorOptions())
        assert mask.sum() == (256 - 3) * (128 - 2)
        assert not mask[127:130].any() and mask[126].any() and mask[130].any()


@settings(max_examples=200)
@given(hnp.arrays(float, st.tuples(st.integers(6, 24), st.integers(6, 24)),
                  elements=st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.0])),
       st.integers(0, 2), st.integers(0, 2))
def test_matches_exhaustive_scan(mag, rows, cols):
    opts = DetectorOptions(rows, cols)
    allowed = search_mask(mag.shape, opts)
    row, col, peak = detect_peak(mag, opts)
    assert (row, col) == exhaustive_argmax(mag, allowed)
    assert allowed[row, col]
    assert peak == mag[row, col]


@settings(max_examples=100)
@given(hnp.arrays(float, (32, 16), elements=st.floats(0, 1e3)),
       st.floats(1e-6, 1e6))
def test_scale_invariance(mag, k):
    mag = np.round(mag, 2)  # distinct values stay distinct after scaling
    assert detect_peak(mag)[:2] == detect_peak(mag * k)[:2]


class TestBinsToPhysical:
    def test_center_row_and_column_zero(self, cfg):
        m = np.zeros((256, 128))
        assert bins_to_physical(m, 128, 0, range_axis=cfg.range_axis,
                                velocity_axis=cfg.velocity_axis) == (0.0, 0.0)

    def test_equal_neighbours_offset_zero(self, cfg):
        m = np.zeros((256, 128))
        m[100, 49:52] = [1.0, 2.0, 1.0]
        m[99:102, 50] = [1.0, 2.0, 1.0]
        opts = DetectorOptions(parabolic_interpolation=True)
        r, v = bins_to_physical(m, 100, 50, opts, cfg.range_axis, cfg.velocity_axis)
        assert r == cfg.range_axis[50] and v == cfg.velocity_axis[100]

    def test_offset_clipped_to_half_bin(self, cfg):
        m = np.zeros((256, 128))
        m[100, 49:52] = [0.0, 1.0, 1.0]
        opts = DetectorOptions(parabolic_interpolation=True)
        r, _ = bins_to_physical(m, 100, 50, opts, cfg.range_axis, cfg.velocity_axis)
        assert r == pytest.approx(cfg.range_axis[50] + 0.5 * cfg.range_bin_spacing)

    @pytest.mark.parametrize("row, col", [(-1, 0), (0, 128), (256, 5)])
    def test_out_of_bounds(self, cfg, row, col):
        with pytest.raises(ValueError):
            bins_to_physical(np.zeros((256, 128)), row, col, range_axis=cfg.range_axis,
                             velocity_axis=cfg.velocity_axis)


class TestGate:
    @pytest.mark.parametrize("rng, expected", [(3.69, True), (3.71, False)])
    def test_examples(self, cfg, rng, expected):
        p = gate(TrackPoint(0.0, rng, 1.0, 2.0), cfg)
        assert p.in_range is expected
        assert (p.timestamp, p.range, p.radial_velocity, p.peak_magnitude) == (0.0, rng, 1.0, 2.0)

    def test_closed_bound(self, cfg):
        assert gate(TrackPoint(0.0, cfg.max_range, 0.0, 1.0), cfg).in_range


class TestTrackRun:
    def _maps(self, cfg, scenario):
        return [process_frame(cfg, f) for f in simulate_run(cfg, scenario)[0]]

    def test_count_and_order(self, cfg):
        sc = Scenario(1.0, targets=(Scatterer((0.0, 2.0), (0.0, 1.0)),))
        maps = self._maps(cfg, sc)
        pts = track_run(maps, DetectorOptions(), cfg)
        assert len(pts) == 20
        assert [p.timestamp for p in pts] == [m.timestamp for m in maps]

    def test_constant_scene_identical(self, cfg):
        x = beat_signal(cfg, [2.0], [1.0], [1.0])
        maps = [process_frame(cfg, x) for _ in range(5)]
        pts = track_run(maps, DetectorOptions(), cfg)
        assert len({(p.range, p.radial_velocity) for p in pts}) == 1

    def test_receding_target_non_decreasing(self, cfg):
        sc = Scenario(4.0, targets=(Scatterer((0.0, 1.0), (0.0, 0.8)),))
        frames, truth = simulate_run(cfg, sc)
        pts = track_run([process_frame(cfg, f) for f in frames], DetectorOptions(), cfg)
        in_range = [p for p, g in zip(pts, truth) if g.in_range]
        ranges = [p.range for p in in_range]
        assert all(b >= a for a, b in zip(ranges, ranges[1:]))
        assert ranges[-1] - ranges[0] >= 1.0
        for p, g in zip(pts, truth):
            if g.in_range:
                assert abs(p.range - g.range) <= cfg.range_bin_spacing / 2


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 0.9), st.floats(0, 1), st.booleans(), st.booleans())
def test_noiseless_accuracy(r_frac, v_frac, negative, interp):
    cfg = RadarConfig()
    r = r_frac * cfg.max_range
    lo, hi = 2 * cfg.velocity_bin_spacing, 0.9 * cfg.max_velocity
    v = (lo + v_frac * (hi - lo)) * (-1 if negative else 1)
    rd = process_frame(cfg, beat_signal(cfg, [r], [v], [1.0]))
    opts = DetectorOptions(parabolic_interpolation=interp)
    row, col, _ = detect_peak(rd, opts)
    er, ev = bins_to_physical(rd, row, col, opts)
    limit = 0.25 if interp else 0.5
    assert abs(er - r) <= limit * cfg.range_bin_spacing
    assert abs(ev - v) <= limit * cfg.velocity_bin_spacing
