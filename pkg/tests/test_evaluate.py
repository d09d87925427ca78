import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from racerad.detect import TrackPoint
from racerad.evaluate import (AlignedPair, RmseReport, align, compute_rmse, evaluate_run,
                              export_report, load_report, summarize_runs)
from racerad.scene import GroundTruthPoint


def track(ts, r=1.0, v=0.5, in_range=True):
    return TrackPoint(ts, r, v, 1.0, in_range)


def truth(ts, r=1.0, v=0.5, in_range=True):
    return GroundTruthPoint(ts, r, v, in_range)


def pair(dr=0.0, dv=0.0):
    return AlignedPair(0.0, 1.0 + dr, 1.0, dv, 0.0)


class TestAlign:
    def test_identical_timestamps(self):
        ts = [0.0, 0.05, 0.1]
        assert len(align([track(t) for t in ts], [truth(t) for t in ts])) == 3

    def test_offset_within_tolerance(self):
        assert len(align([track(0.010)], [truth(0.0)], 0.025)) == 1

    def test_offset_outside_tolerance(self):
        assert align([track(0.030)], [truth(0.0)], 0.025) == []

    def test_nearest_wins(self):
        pairs = align([track(0.05)], [truth(0.03, r=5.0), truth(0.06, r=7.0)], 0.025)
        assert [p.true_range for p in pairs] == [7.0]

    def test_truth_used_once(self):
        pairs = align([track(0.0), track(0.001)], [truth(0.0005)], 0.025)
        assert len(pairs) == 1

    def test_out_of_range_track_skipped(self):
        assert align([track(0.0, in_range=False)], [truth(0.0)]) == []

    def test_out_of_range_truth_skipped(self):
        assert align([track(0.0)], [truth(0.0, in_range=False)]) == []

    def test_unsorted(self):
        with pytest.raises(ValueError):
            align([track(0.1), track(0.0)], [])
        with pytest.raises(ValueError):
            align([], [truth(0.1), truth(0.0)])


class TestRmse:
    def test_perfect(self):
        assert compute_rmse([pair(), pair()]) == (0.0, 0.0)

    def test_plus_minus_one(self):
        assert compute_rmse([pair(1.0), pair(-1.0)])[0] == pytest.approx(1.0)

    def test_three_four(self):
        assert compute_rmse([pair(3.0), pair(4.0)])[0] == pytest.approx(math.sqrt(12.5))
        assert compute_rmse([pair(3.0), pair(4.0)])[0] == pytest.approx(3.5355, abs=1e-4)

    def test_empty(self):
        with pytest.raises(ValueError):
            compute_rmse([])

    @given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=30),
           st.randoms())
    def test_permutation_invariant_and_nonnegative(self, errs, rnd):
        pairs = [pair(a, b) for a, b in errs]
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        r1, v1 = compute_rmse(pairs)
        r2, v2 = compute_rmse(shuffled)
        assert r1 == pytest.approx(r2, rel=1e-12, abs=1e-300)
        assert v1 == pytest.approx(v2, rel=1e-12, abs=1e-300)
        assert r1 >= 0 and v1 >= 0
        assert (r1 == 0) == all(p.est_range == p.true_range for p in pairs)

    def test_out_of_range_points_never_count(self):
        ts = [0.0, 0.05, 0.1]
        good = [track(t, r=1.1) for t in ts]
        bad = list(good)
        bad[1] = track(0.05, r=99.0, v=-40.0, in_range=False)
        truths = [truth(t) for t in ts]
        # the gated point neither contributes nor steals a truth sample
        assert evaluate_run(bad, truths) == evaluate_run(good[:1] + good[2:], truths)


class TestSummarize:
    def test_constant(self):
        rep = summarize_runs([(1.0, 2.0)] * 3)
        assert (rep.range_rmse_mean, rep.range_rmse_std) == (1.0, 0.0)
        assert (rep.velocity_rmse_mean, rep.velocity_rmse_std) == (2.0, 0.0)

    def test_zero_two(self):
        rep = summarize_runs([(0.0, 0.0), (2.0, 2.0)])
        assert rep.range_rmse_mean == 1.0 and rep.range_rmse_std == 1.0

    def test_single_run(self):
        rep = summarize_runs([(0.3, 0.4, 12)])
        assert rep.range_rmse_std == 0.0 and rep.velocity_rmse_std == 0.0
        assert rep.range_rmse == 0.3 and rep.sample_count == 12 and rep.runs == 1

    def test_pooled_weights_by_count(self):
        rep = summarize_runs([(1.0, 0.0, 1), (2.0, 0.0, 3)])
        assert rep.range_rmse == pytest.approx(math.sqrt((1 + 3 * 4) / 4))

    @given(st.floats(0, 10), st.floats(0, 10), st.integers(1, 8))
    def test_identical_runs_exact(self, r, v, k):
        rep = summarize_runs([(r, v, 5)] * k)
        assert rep.range_rmse_std == 0.0 and rep.velocity_rmse_std == 0.0
        assert rep.range_rmse_mean == r and rep.velocity_rmse_mean == v

    def test_empty(self):
        with pytest.raises(ValueError):
            summarize_runs([])


class TestExport:
    def report(self):
        return summarize_runs([(0.01, 0.02, 10), (0.03, 0.01, 12)])

    def test_round_trip(self):
        rep = self.report()
        assert load_report(export_report(rep)) == rep

    def test_unit_suffixes(self):
        text = export_report(self.report())
        assert '"range_rmse_m"' in text and '"velocity_rmse_mps"' in text

    def test_byte_identical(self):
        assert export_report(self.report()) == export_report(self.report())
        assert export_report(self.report()).endswith("}\n")

    def test_from_dict_type(self):
        assert isinstance(RmseReport.from_dict(self.report().to_dict()), RmseReport)
