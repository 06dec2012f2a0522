"""Stopping path / region construction and the disjointness check."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopsim.dynamics import AgentState, stopping_distance
from stopsim.geom import Capsule, PolylinePath
from stopsim.safety import (SafetyParams, disjointness, reachable_region,
                            stopping_path, stopping_region)
from test_geom import points_in_capsule, sample_capsule_points

LANE = PolylinePath.from_points([(0.0, 0.0), (300.0, 0.0)])
SPOT = PolylinePath.from_points([(225.0, 0.0)])
PARAMS = SafetyParams(inflation_margin=0.25, contingency_decel_mag=7.2)
BARE = SafetyParams(inflation_margin=0.0, contingency_decel_mag=7.2)


class TestStoppingPath:
    def test_at_rest_is_standing_disc(self):
        sp = stopping_path(AgentState(50.0, 0.0), LANE, PARAMS, 1.0)
        assert sp.span == (50.0, 50.0)
        assert sp.d_stop == 0.0
        cap = sp.footprint.capsules[0]
        assert cap.a == cap.b == (50.0, 0.0)
        assert cap.radius == 1.25  # radius + inflation

    def test_span_from_speed(self):
        sp = stopping_path(AgentState(100.0, 20.0), LANE, PARAMS, 1.0)
        assert sp.span[0] == 100.0
        assert sp.span[1] == pytest.approx(100.0 + 400.0 / 14.4)
        assert sp.d_stop == pytest.approx(stopping_distance(20.0, 7.2))

    def test_stationary_obstacle_disc(self):
        sp = stopping_path(AgentState(0.0, 0.0), SPOT, PARAMS, 0.5)
        cap = sp.footprint.capsules[0]
        assert cap.a == cap.b == (225.0, 0.0)
        assert cap.radius == 0.75

    def test_open_end_overrun_extends(self):
        sp = stopping_path(AgentState(295.0, 20.0), LANE, PARAMS, 1.0)
        assert sp.overrun == pytest.approx(295.0 + 400.0 / 14.4 - 300.0)
        assert not sp.end_blocked
        end = sp.footprint.capsules[-1].b
        assert end[0] == pytest.approx(295.0 + 400.0 / 14.4)

    def test_closed_end_marks_blocked(self):
        closed = SafetyParams(0.25, 7.2, closed_path_ends=True)
        sp = stopping_path(AgentState(295.0, 20.0), LANE, closed, 1.0)
        assert sp.end_blocked
        report = disjointness(
            stopping_region(AgentState(295.0, 20.0), [LANE], closed, 1.0, "a"),
            [])
        assert not report.holds
        assert ("path-end", 0) in report.blocking_pairs


class TestStoppingRegion:
    def test_single_path_region(self):
        region = stopping_region(AgentState(10.0, 5.0), [LANE], PARAMS, 1.0, "a")
        assert len(region.members) == 1
        assert region.members[0].path_index == 0

    def test_two_lane_symmetry(self):
        upper = PolylinePath.from_points([(0.0, 3.0), (300.0, 3.0)])
        region = stopping_region(AgentState(40.0, 10.0), [LANE, upper],
                                 PARAMS, 1.0, "a")
        assert len(region.members) == 2
        spans = {m.span for m in region.members}
        assert len(spans) == 1  # equal spans, laterally offset footprints
        ys = {m.footprint.capsules[0].a[1] for m in region.members}
        assert ys == {0.0, 3.0}

    def test_rest_multi_path_all_discs(self):
        upper = PolylinePath.from_points([(0.0, 3.0), (300.0, 3.0)])
        region = stopping_region(AgentState(40.0, 0.0), [LANE, upper],
                                 PARAMS, 1.0, "a")
        for member in region.members:
            assert member.span == (40.0, 40.0)

    def test_empty_path_set_rejected(self):
        with pytest.raises(ValueError):
            stopping_region(AgentState(0.0, 0.0), [], PARAMS, 1.0, "a")


class TestDisjointness:
    def cyclist_region(self, inflation=0.25):
        params = SafetyParams(inflation, 7.2)
        return stopping_region(AgentState(0.0, 0.0), [SPOT], params, 0.5, "cyc")

    def test_vacuous_without_others(self):
        region = stopping_region(AgentState(0.0, 20.0), [LANE], PARAMS, 1.0, "a")
        report = disjointness(region, [])
        assert report.holds and report.safe_path_indices == (0,)

    def test_far_from_cyclist_holds(self):
        ego = stopping_region(AgentState(0.0, 20.0), [LANE], PARAMS, 1.0, "ego")
        assert disjointness(ego, [self.cyclist_region()]).holds

    def test_span_reaching_cyclist_fails(self):
        # span [200, 227.78] with bare radii 1.0 + 0.5 overlaps the disc at 225
        ego = stopping_region(AgentState(200.0, 20.0), [LANE], BARE, 1.0, "ego")
        report = disjointness(ego, [self.cyclist_region(inflation=0.0)])
        assert not report.holds
        assert ("cyc", 0) in report.blocking_pairs

    def test_zero_speed_nonoverlapping_discs_hold(self):
        a = stopping_region(AgentState(0.0, 0.0), [LANE], PARAMS, 1.0, "a")
        b = stopping_region(AgentState(10.0, 0.0), [LANE], PARAMS, 1.0, "b")
        assert disjointness(a, [b]).holds
        assert disjointness(b, [a]).holds

    def test_symmetric_blocking_single_path(self):
        east = PolylinePath.from_points([(0.0, 0.0), (100.0, 0.0)])
        west = PolylinePath.from_points([(100.0, 0.0), (0.0, 0.0)])
        a = stopping_region(AgentState(40.0, 15.0), [east], PARAMS, 1.0, "a")
        b = stopping_region(AgentState(40.0, 15.0), [west], PARAMS, 1.0, "b")
        assert not disjointness(a, [b]).holds
        assert not disjointness(b, [a]).holds

    @given(st.floats(0.0, 25.0), st.floats(0.0, 25.0), st.floats(0.0, 180.0))
    @settings(max_examples=60, deadline=None)
    def test_speed_monotonicity_containment(self, v1, v2, s):
        lo, hi = sorted((v1, v2))
        small = stopping_path(AgentState(s, lo), LANE, PARAMS, 1.0)
        big = stopping_path(AgentState(s, hi), LANE, PARAMS, 1.0)
        for cap in small.footprint.capsules:
            pts = sample_capsule_points(cap, 300)
            covered = np.zeros(len(pts), dtype=bool)
            for other in big.footprint.capsules:
                grown = Capsule(other.a, other.b, other.radius + 1e-9)
                covered |= points_in_capsule(pts, grown)
            assert covered.all()

    @given(st.floats(0.0, 20.0), st.floats(60.0, 260.0),
           st.floats(0.0, 0.5), st.floats(0.0, 0.5))
    @settings(max_examples=80, deadline=None)
    def test_conservatism_monotonicity(self, v, obstacle_x, infl_lo, infl_hi):
        # more inflation or weaker assumed braking never flips false -> true
        lo, hi = sorted((infl_lo, infl_hi))
        spot = PolylinePath.from_points([(obstacle_x, 0.0)])

        def verdict(inflation, decel):
            params = SafetyParams(inflation, decel)
            ego = stopping_region(AgentState(0.0, v), [LANE], params, 1.0, "e")
            other = stopping_region(AgentState(0.0, 0.0), [spot], params,
                                    0.5, "o")
            return disjointness(ego, [other]).holds

        if not verdict(lo, 7.2):
            assert not verdict(hi, 7.2)
        if not verdict(lo, 7.2):
            assert not verdict(lo, 6.4)


class TestReachableRegion:
    def test_envelope_contains_current_span(self):
        state = AgentState(50.0, 12.0)
        model_kwargs = dict(a_max=3.5, a_brake_peak=8.0, brake_fraction=0.9)
        from stopsim.dynamics import ModelParams
        env = reachable_region(state, [LANE], PARAMS, 1.0,
                               ModelParams(**model_kwargs), 0.05, "a")
        now = stopping_region(state, [LANE], PARAMS, 1.0, "a")
        assert env.members[0].span[0] == now.members[0].span[0]
        assert env.members[0].span[1] > now.members[0].span[1]

    def test_stationary_envelope_equals_region(self):
        from stopsim.dynamics import ModelParams
        model = ModelParams(a_max=0.0, a_brake_peak=8.0, brake_fraction=0.9)
        state = AgentState(0.0, 0.0)
        env = reachable_region(state, [SPOT], PARAMS, 0.5, model, 0.05, "cyc")
        now = stopping_region(state, [SPOT], PARAMS, 0.5, "cyc")
        assert env.members[0].span == now.members[0].span
