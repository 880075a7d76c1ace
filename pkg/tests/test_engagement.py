import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from encircle.engagement import (
    AttackerConfig,
    BearingAngles,
    Maneuver,
    RelativeState,
    TargetState,
    advance_headings,
    bearing_angles,
    decompose_target_accel,
    reconstruct_position,
    relative_derivatives,
    relative_velocity,
    reverse_los,
    target_accel_profile,
    wrap_angle,
)

angles = st.floats(-50.0, 50.0, allow_nan=False)


def test_wrap_angle_range():
    for a in np.linspace(-30, 30, 1001):
        w = wrap_angle(a)
        assert -math.pi <= w < math.pi


class TestReverseLos:
    def test_at_pi_boundary(self):
        # pi normalizes to -pi under the [-pi, pi) convention; its antipode is 0
        assert reverse_los(wrap_angle(math.pi)) == pytest.approx(0.0)

    def test_at_zero(self):
        assert reverse_los(0.0) == pytest.approx(-math.pi)

    def test_antipode(self):
        assert reverse_los(-math.pi / 2) == pytest.approx(math.pi / 2)

    @given(angles)
    def test_involution(self, a):
        assert reverse_los(reverse_los(a)) == pytest.approx(wrap_angle(a), abs=1e-12)


class TestBearingAngles:
    def test_attacker_along_los(self):
        b = bearing_angles(0.7, 0.7, 0.0)
        assert b.lead == pytest.approx(0.0)

    def test_target_along_reversed_los(self):
        los = 0.3
        b = bearing_angles(los, 0.0, reverse_los(los))
        assert b.aspect == pytest.approx(0.0)

    def test_lead_from_preset_geometry(self):
        b = bearing_angles(-0.8851, 0.6283, 1.0472)
        assert b.lead == pytest.approx(1.5134, abs=1e-10)

    @given(angles, angles, angles, st.integers(-3, 3))
    @settings(max_examples=200)
    def test_invariant_under_full_turns(self, los, ga, gt, k):
        b0 = bearing_angles(los, ga, gt)
        b1 = bearing_angles(los + 2 * math.pi * k, ga, gt)
        v0 = relative_velocity(b0, 0.7, 1.0)
        v1 = relative_velocity(b1, 0.7, 1.0)
        assert v0 == pytest.approx(v1, abs=1e-9)


class TestRelativeVelocity:
    def test_head_on(self):
        b = BearingAngles(lead=math.pi, aspect=0.0, los_rev=0.0)
        v_r, v_los = relative_velocity(b, 0.7, 1.0)
        assert v_r == pytest.approx(1.7)
        assert v_los == pytest.approx(0.0, abs=1e-15)

    def test_matched_projections(self):
        b = BearingAngles(lead=0.0, aspect=0.0, los_rev=0.0)
        assert relative_velocity(b, 1.0, 1.0) == pytest.approx((0.0, 0.0))

    def test_pure_transverse(self):
        b = BearingAngles(lead=-math.pi / 2, aspect=math.pi / 2, los_rev=0.0)
        v_r, v_los = relative_velocity(b, 0.7, 1.0)
        assert v_r == pytest.approx(0.0, abs=1e-15)
        assert v_los == pytest.approx(1.7)


class TestRelativeDerivatives:
    def test_all_terms_vanish(self):
        rel = RelativeState(r=3.0, los=0.0, v_r=0.5, v_los=0.0)
        dv_r, _ = relative_derivatives(rel, 0.0, 0.0, 0.0, 0.0)
        assert dv_r == 0.0

    def test_direct_substitution(self):
        rel = RelativeState(r=2.0, los=0.0, v_r=-1.0, v_los=1.0)
        dv_r, dv_los = relative_derivatives(rel, 0.0, 0.0, 0.0, 0.0)
        assert dv_r == pytest.approx(0.5)
        assert dv_los == pytest.approx(0.5)

    def test_exact_cancellation(self):
        rel = RelativeState(r=2.0, los=0.0, v_r=-1.0, v_los=1.3)
        a_tr = 0.07
        dv_r, _ = relative_derivatives(rel, rel.v_los**2 / rel.r + a_tr, 0.0, a_tr, 0.0)
        assert dv_r == pytest.approx(0.0, abs=1e-15)

    def test_singular_range(self):
        rel = RelativeState(r=0.005, los=0.0, v_r=0.0, v_los=0.0)
        with pytest.raises(ValueError):
            relative_derivatives(rel, 0, 0, 0, 0, r_min=0.01)


class TestDecomposeTargetAccel:
    def test_zero_aspect_is_pure_transverse(self):
        assert decompose_target_accel(0.2, 0.0) == pytest.approx((0.0, 0.2))

    def test_quarter_turn(self):
        a_tr, a_tlos = decompose_target_accel(0.1, math.pi / 2)
        assert a_tr == pytest.approx(-0.1)
        assert a_tlos == pytest.approx(0.0, abs=1e-15)

    def test_no_maneuver(self):
        assert decompose_target_accel(0.0, 1.234) == (0.0, 0.0)

    @given(st.floats(-1, 1), angles)
    def test_magnitude_preserved(self, a_t, phi):
        a_tr, a_tlos = decompose_target_accel(a_t, phi)
        assert a_tr**2 + a_tlos**2 == pytest.approx(a_t**2, abs=1e-12)


class TestManeuverProfile:
    def test_sinusoid_at_zero(self):
        m = Maneuver(kind="sinusoid", amplitude=0.1, frequency=10.0)
        assert target_accel_profile(0.0, m) == 0.0

    def test_sinusoid_at_quarter_period(self):
        m = Maneuver(kind="sinusoid", amplitude=0.1, frequency=10.0)
        assert target_accel_profile(math.pi / 20, m) == pytest.approx(0.1)

    def test_exogenous_decay(self):
        m = Maneuver(kind="exogenous", pole=-2.0, initial=0.3)
        assert target_accel_profile(1.5, m) == pytest.approx(0.3 * math.exp(-3.0))

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown maneuver"):
            Maneuver(kind="weave")

    def test_negative_time(self):
        with pytest.raises(ValueError):
            target_accel_profile(-1.0, Maneuver(kind="none"))


class TestAdvanceHeadings:
    def test_zero_accel_keeps_heading(self):
        ga, _ = advance_headings(0.4, 0.0, 0.7, 0.0, 0.1, 1.0, 0.01)
        assert ga == pytest.approx(0.4)

    def test_constant_target_accel(self):
        _, gt = advance_headings(0.0, 0.0, 0.7, 0.0, 0.2, 1.0, 1.0)
        assert gt == pytest.approx(0.2)

    def test_sinusoid_full_period_integrates_to_zero(self):
        # gamma' = 0.1 sin(10 t), integrated over one period with small steps
        h = 1e-5
        gt = 0.0
        n = round(2 * math.pi / 10 / h)
        for k in range(n):
            a_t = 0.1 * math.sin(10 * (k + 0.5) * h)  # midpoint rule
            _, gt = advance_headings(0.0, 0.0, 0.7, gt, a_t, 1.0, h)
        assert gt == pytest.approx(0.0, abs=1e-6)


class TestReconstructPosition:
    def test_unit_range_on_axis(self):
        assert reconstruct_position(0.0, 0.0, 1.0, 0.0) == pytest.approx((-1.0, 0.0))

    def test_preset_geometry(self):
        x, y = reconstruct_position(6.5, 0.5, 7.1063, -0.8851)
        assert x == pytest.approx(6.5 - 7.1063 * math.cos(-0.8851))
        assert y == pytest.approx(0.5 - 7.1063 * math.sin(-0.8851))

    def test_zero_range_coincides(self):
        assert reconstruct_position(2.0, 3.0, 0.0, 1.0) == pytest.approx((2.0, 3.0))


class TestConfigValidation:
    def test_rejects_nonpositive_speed(self):
        with pytest.raises(ValueError):
            AttackerConfig(speed=0.0, heading0=0, r0=1.0, los0=0)

    def test_rejects_nonpositive_range(self):
        with pytest.raises(ValueError):
            AttackerConfig(speed=0.7, heading0=0, r0=0.0, los0=0)

    def test_rejects_nonpositive_target_speed(self):
        with pytest.raises(ValueError):
            TargetState(x=0, y=0, heading=0, speed=-1.0)
