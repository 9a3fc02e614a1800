import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fuzzytsfd import FcmConfig, InsufficientRangeError, elbow, select_all, select_by_rule, sweep, tsfd_angle, visual_tsfd
from fuzzytsfd.errors import DegenerateDataError
from fuzzytsfd.selection import angle_monotonicity_violations, second_differences

from . import oracles

values = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def k_series(draw, min_size=3, max_size=10):
    size = draw(st.integers(min_size, max_size))
    start = draw(st.integers(2, 5))
    return {start + i: draw(values) for i in range(size)}


class TestSweep:
    def test_singleton_range(self, ruspini):
        res = sweep(ruspini, FcmConfig(2, seed=0), 3, 3)
        assert res.ks == [3]

    def test_ruspini_complete(self, ruspini_sweep):
        assert ruspini_sweep.ks == list(range(2, 13))
        assert not ruspini_sweep.failures
        for k, e in ruspini_sweep.per_k.items():
            assert e.report.k == k and e.report.n == 75
            assert all(math.isfinite(v) for v in e.report.as_dict().values())

    def test_deterministic(self, ruspini):
        a = sweep(ruspini, FcmConfig(2, seed=4), 2, 5)
        b = sweep(ruspini, FcmConfig(2, seed=4), 2, 5)
        assert a == b

    @pytest.mark.parametrize("k_min, k_max", [(1, 3), (4, 3), (2, 75)])
    def test_bad_range(self, ruspini, k_min, k_max):
        with pytest.raises(InsufficientRangeError):
            sweep(ruspini, FcmConfig(2), k_min, k_max)

    def test_failed_k_recorded(self):
        from fuzzytsfd import Dataset

        # only 3 distinct coordinates: K = 4 cannot be initialised
        data = Dataset(np.array([[0.0], [0.0], [1.0], [1.0], [5.0], [5.0]]))
        res = sweep(data, FcmConfig(2, seed=0), 2, 4)
        assert res.ks == [2, 3]
        assert 4 in res.failures and "DegenerateDataError" in res.failures[4]


class TestSelectByRule:
    def test_argmax(self):
        assert select_by_rule({"v_pc": {2: 0.9, 3: 0.7}})["v_pc"] == 2

    def test_argmin(self):
        assert select_by_rule({"v_fs": {2: 5.0, 3: -1.0, 4: 2.0}})["v_fs"] == 3

    def test_tie_goes_small(self):
        assert select_by_rule({"v_cl": {3: 0.8, 4: 0.1, 5: 0.8}})["v_cl"] == 3

    def test_inf_wins_argmax(self):
        assert select_by_rule({"v_fratio": {2: 1.0, 3: math.inf, 4: 9.0}})["v_fratio"] == 3

    @given(k_series(min_size=1), st.floats(0.01, 100), st.floats(-100, 100))
    def test_affine_invariance(self, series, a, b):
        moved = {k: a * v + b for k, v in series.items()}
        # the transform must not merge distinct values through rounding
        assume(len(set(moved.values())) == len(set(series.values())))
        for name in ("v_pc", "v_xb"):
            assert select_by_rule({name: series})[name] == select_by_rule({name: moved})[name]


class TestElbow:
    def test_worked_example(self):
        # second differences: -0.2 at K=3, -0.05 at K=4
        series = {2: 0.5, 3: 0.8, 4: 0.9, 5: 0.95}
        diffs = second_differences(series)
        assert diffs[3] == pytest.approx(-0.2) and diffs[4] == pytest.approx(-0.05)
        assert elbow(series) == 3

    def test_linear_series_ties_to_smallest(self):
        assert elbow({k: 3 * k + 1 for k in range(2, 9)}) == 3

    def test_minimized_is_negated(self):
        series = {2: 0.5, 3: 0.8, 4: 0.9, 5: 0.95}
        assert elbow({k: -v for k, v in series.items()}, "minimized") == 3

    @pytest.mark.parametrize("series", [{2: 1.0, 3: 2.0}, {2: 1.0, 4: 2.0, 6: 3.0}, {}])
    def test_insufficient(self, series):
        with pytest.raises(InsufficientRangeError):
            elbow(series)

    def test_gap_in_range(self):
        # K=5 missing, so only K=3 has both neighbours
        assert elbow({2: 0.0, 3: 1.0, 4: 1.5, 6: 0.0, 7: 5.0}) == 3

    @given(k_series(), st.integers(-1000, 1000))
    def test_shift_invariance(self, series, shift):
        ints = {k: round(v) for k, v in series.items()}
        assert elbow(ints) == elbow({k: v + shift for k, v in ints.items()})

    @given(k_series())
    def test_matches_exhaustive(self, series):
        assert elbow(series) == oracles.elbow(series)


class TestVisual:
    def test_on_diagonal(self):
        assert tsfd_angle(3.0, 3.0) == 0.0

    def test_half(self):
        assert tsfd_angle(1.0, 2.0) == pytest.approx(45.0 - math.degrees(math.atan(0.5)), abs=1e-12)
        assert tsfd_angle(1.0, 2.0) == pytest.approx(18.435, abs=1e-3)

    def test_degenerate(self):
        with pytest.raises(DegenerateDataError):
            tsfd_angle(0.0, 0.0)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_range_and_order(self, a, b):
        fa, fb = tsfd_angle(a, 1.0), tsfd_angle(b, 1.0)
        assert 0.0 <= fa <= 45.0
        if a < b:
            assert fa >= fb
        # strictly decreasing once the ratios differ by more than float resolution
        if b - a > 1e-9:
            assert fa > fb

    def test_candidates(self):
        # angles 20, 10, 9.5, 4, 3.9 -> drops beyond 2 degrees at K=3 and K=5
        angles = {2: 20.0, 3: 10.0, 4: 9.5, 5: 4.0, 6: 3.9}
        pts = {k: (1.0, math.tan(math.radians(45 - a))) for k, a in angles.items()}
        vis = visual_tsfd(pts, 0.10)
        assert vis.candidates == [3, 5]
        assert vis.chosen == 5
        for k, a in angles.items():
            assert vis.angles[k] == pytest.approx(a, abs=1e-9)

    def test_no_drop_keeps_k_min(self):
        vis = visual_tsfd({2: (1.0, 0.5), 3: (1.0, 0.5)})
        assert vis.candidates == [2]

    def test_ruspini(self, ruspini_sweep):
        vis = visual_tsfd(ruspini_sweep)
        assert 4 in vis.candidates
        assert vis.candidates == sorted(vis.candidates)
        assert set(vis.candidates) <= set(ruspini_sweep.ks)
        assert all(0 <= a <= 45 for a in vis.angles.values())

    @settings(max_examples=50)
    @given(st.lists(st.tuples(st.floats(0.01, 100), st.floats(0, 1)), min_size=1, max_size=12), st.floats(0, 1))
    def test_candidates_property(self, pairs, thr):
        pts = {k: (fi, fi * r) for k, (fi, r) in enumerate(pairs, start=2)}
        vis = visual_tsfd(pts, thr)
        assert vis.candidates and vis.candidates == sorted(set(vis.candidates))
        assert set(vis.candidates) <= set(pts)

    def test_monotonicity_report(self):
        assert angle_monotonicity_violations({2: 10.0, 3: 8.0, 4: 9.0, 5: 1.0}) == [4]


def test_select_all_short_range(ruspini):
    res = sweep(ruspini, FcmConfig(2, seed=0), 4, 4)
    sel = select_all(res)
    assert sel.elbow_tsfd is None
    row = sel.table_row()
    assert row["elbow_tsfd"] == "insufficient range"
    assert row["v_fratio"] == 4
    assert sel.table_row("elbow")["v_fratio"] == "insufficient range"
    assert row["v_pc"] == 4 and row["visual_tsfd"] == "4"


def test_table_row_fratio_rules(ruspini_sweep):
    sel = select_all(ruspini_sweep)
    assert sel.table_row("argmax")["v_fratio"] == sel.by_rule["v_fratio"]
    assert sel.table_row("elbow")["v_fratio"] == elbow(ruspini_sweep.series("v_fratio"))
    assert sel.table_row()["v_fratio"] == sel.table_row("argmax")["v_fratio"]
