"""Window geometry, clutter statistics, and the threshold test."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfarkit.analytic import os_threshold
from cfarkit.detector import (
    Decision,
    DetectorSpec,
    GeometricMean,
    Minimum,
    OrderStatistic,
    Sum,
    Window,
    clutter_statistic,
    decide,
    slide,
    window_at,
)

SCALES = (1e-6, 1e-3, 1.0, 1e3, 1e6)


class TestClutterStatistic:
    def test_sum(self):
        assert clutter_statistic(Sum(), [1.0, 2.0, 3.0]) == 6.0

    def test_order_statistic(self):
        assert clutter_statistic(OrderStatistic(2), [3.0, 1.0, 2.0]) == 2.0

    def test_geometric_mean(self):
        assert clutter_statistic(GeometricMean(), [1.0, 4.0]) == pytest.approx(2.0, rel=1e-12)

    def test_minimum(self):
        assert clutter_statistic(Minimum(), [3.0, 1.0, 2.0]) == 1.0

    def test_geometric_mean_zero_limit(self):
        assert clutter_statistic(GeometricMean(), [0.0, 4.0, 2.0]) == 0.0

    def test_empty_crp_rejected(self):
        with pytest.raises(ValueError):
            clutter_statistic(Sum(), [])

    def test_order_index_exceeding_crp(self):
        with pytest.raises(ValueError):
            clutter_statistic(OrderStatistic(4), [1.0, 2.0, 3.0])

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            clutter_statistic(Sum(), [1.0, -2.0])

    @given(
        crp=st.lists(st.floats(1e-6, 1e6), min_size=2, max_size=64),
        eta_index=st.integers(0, len(SCALES) - 1),
    )
    @settings(max_examples=300, deadline=None)
    def test_scale_invariance(self, crp, eta_index):
        eta = SCALES[eta_index]
        crp = np.asarray(crp)
        stats = [Sum(), OrderStatistic(1), OrderStatistic(len(crp)), GeometricMean(), Minimum()]
        for stat in stats:
            g = clutter_statistic(stat, crp)
            scaled = clutter_statistic(stat, eta * crp)
            assert abs(scaled - eta * g) <= 1e-12 * eta * g

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        crp = rng.exponential(size=32)
        ordered = np.sort(crp)
        for k in (1, 8, 17, 32):
            for _ in range(5):
                shuffled = rng.permutation(crp)
                assert clutter_statistic(OrderStatistic(k), shuffled) == ordered[k - 1]

    def test_sum_matches_direct_summation(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            crp = rng.exponential(size=32)
            direct = float(np.sum(crp))
            assert abs(clutter_statistic(Sum(), crp) - direct) <= 1e-12 * direct


class TestDecide:
    def test_exceedance_fires(self):
        assert decide(2.0, 1.0, 1.5) is Decision.H1

    def test_tie_resolves_to_h0(self):
        assert decide(1.0, 1.0, 1.0) is Decision.H0

    def test_zero_cut_never_fires_against_positive_threshold(self):
        assert decide(0.0, 3.0, 0.5) is Decision.H0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            decide(-1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            decide(1.0, float("nan"), 1.0)

    def test_scale_invariance_of_decision(self):
        rng = np.random.default_rng(9)
        stats = [Sum(), OrderStatistic(5), GeometricMean(), Minimum()]
        for _ in range(200):
            crp = rng.exponential(size=8)
            z0 = float(rng.exponential())
            tau = float(rng.uniform(0.0, 3.0))
            for stat in stats:
                base = decide(z0, clutter_statistic(stat, crp), tau)
                for eta in SCALES:
                    assert decide(eta * z0, clutter_statistic(stat, eta * crp), tau) is base


class TestDetectorSpec:
    def test_rejects_odd_window(self):
        with pytest.raises(ValueError):
            DetectorSpec(Sum(), 5, 1.0)

    def test_rejects_odd_guard(self):
        with pytest.raises(ValueError):
            DetectorSpec(Sum(), 4, 1.0, guard_cells=3)

    def test_rejects_order_index_above_window(self):
        with pytest.raises(ValueError):
            DetectorSpec(OrderStatistic(9), 8, 1.0)

    def test_rejects_negative_multiplier(self):
        with pytest.raises(ValueError):
            DetectorSpec(Sum(), 8, -0.5)

    def test_stream_key_distinguishes_specs(self):
        a = DetectorSpec(Sum(), 32, 1.0)
        b = DetectorSpec(Sum(), 32, 2.0)
        c = DetectorSpec(OrderStatistic(31), 32, 1.0)
        assert len({a.stream_key(), b.stream_key(), c.stream_key()}) == 3


class TestWindow:
    def test_crp_concatenates_banks(self):
        w = Window(1.0, [1.0, 2.0], [3.0, 4.0])
        np.testing.assert_array_equal(w.crp(), [1.0, 2.0, 3.0, 4.0])

    def test_rejects_unequal_banks(self):
        with pytest.raises(ValueError):
            Window(1.0, [1.0, 2.0], [3.0])

    def test_rejects_negative_values(self):
        with pytest.raises(ValueError):
            Window(-1.0, [1.0], [1.0])


class TestSlide:
    def test_constant_profile_all_h0(self):
        spec = DetectorSpec(Sum(), 4, 1.0, guard_cells=4)
        out = slide(np.ones(20), spec)
        reach = spec.reach
        assert np.all(out[:reach] == Decision.UNTESTED)
        assert np.all(out[-reach:] == Decision.UNTESTED)
        assert np.all(out[reach:-reach] == Decision.H0)  # z0 = 1 vs tau*g = 4

    def test_spike_detected_exactly_once(self):
        # one strong cell in a weak profile; k = N-1 keeps the spike out of
        # every neighbour's clutter estimate
        tau = os_threshold(1e-4, 4, 3)
        spec = DetectorSpec(OrderStatistic(3), 4, tau, guard_cells=2)
        profile = np.full(25, 1e-3)
        profile[12] = 1e3
        out = slide(profile, spec)
        (hits,) = np.nonzero(out == Decision.H1)
        assert list(hits) == [12]

    def test_edge_cells_untested(self):
        spec = DetectorSpec(Sum(), 8, 0.5, guard_cells=4)
        out = slide(np.ones(40), spec)
        reach = spec.half_window + spec.guard_per_side
        assert np.all(out[:reach] == Decision.UNTESTED)
        assert np.all(out[40 - reach :] == Decision.UNTESTED)
        assert np.all(out[reach : 40 - reach] != Decision.UNTESTED)

    def test_short_profile_rejected(self):
        spec = DetectorSpec(Sum(), 8, 1.0, guard_cells=4)
        with pytest.raises(ValueError):
            slide(np.ones(12), spec)  # needs N + guard + 1 = 13

    def test_window_at_extracts_expected_cells(self):
        spec = DetectorSpec(Sum(), 4, 1.0, guard_cells=2)
        profile = np.arange(20.0)
        w = window_at(profile, 10, spec)
        assert w.cut == 10.0
        np.testing.assert_array_equal(w.lagging, [7.0, 8.0])  # beyond 1 guard cell
        np.testing.assert_array_equal(w.leading, [12.0, 13.0])

    def test_window_at_rejects_edge(self):
        spec = DetectorSpec(Sum(), 4, 1.0, guard_cells=2)
        with pytest.raises(ValueError):
            window_at(np.arange(20.0), 2, spec)
