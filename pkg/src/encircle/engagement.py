"""Planar attacker-target engagement geometry and LOS-frame kinematics.

All states live in the rotating line-of-sight (LOS) frame of each attacker:
range ``r``, LOS angle ``los``, closing-rate component ``v_r`` and transverse
component ``v_los``.  The relative-motion equations are

    r' = v_r                  v_r' = v_los^2 / r - a_mr + a_tr
    los' = v_los / r          v_los' = -v_los v_r / r - a_mlos + a_tlos

with (a_mr, a_mlos) the attacker acceleration expressed in LOS components and
(a_tr, a_tlos) the target acceleration likewise.  Units: km, s, rad.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    return (a + math.pi) % TWO_PI - math.pi


def reverse_los(los: float) -> float:
    """Antipodal LOS direction (the target-to-attacker ray), in [-pi, pi).

    Equivalent to adding pi below the branch point and subtracting pi above
    it, then re-normalizing.
    """
    return wrap_angle(los + math.pi)


@dataclass
class TargetState:
    """Target inertial pose.  Speed is constant; acceleration is lateral
    (perpendicular to the velocity), so only the heading changes."""

    x: float
    y: float
    heading: float
    speed: float
    accel: float = 0.0

    def __post_init__(self) -> None:
        if self.speed <= 0:
            raise ValueError("target speed must be positive")


@dataclass
class RelativeState:
    """Per-attacker LOS-frame relative state."""

    r: float
    los: float
    v_r: float
    v_los: float


@dataclass
class AttackerConfig:
    """Initial condition of one attacker: constant speed, initial heading,
    range and LOS angle to the target."""

    speed: float
    heading0: float
    r0: float
    los0: float

    def __post_init__(self) -> None:
        if self.speed <= 0:
            raise ValueError("attacker speed must be positive")
        if self.r0 <= 0:
            raise ValueError("initial range must be positive")


@dataclass
class BearingAngles:
    """Bearing decomposition of one engagement.

    ``lead`` is the angle from the LOS to the attacker velocity, ``aspect``
    the angle from the reversed LOS to the target velocity, ``los_rev`` the
    reversed LOS direction itself.
    """

    lead: float
    aspect: float
    los_rev: float


def bearing_angles(los: float, attacker_heading: float, target_heading: float) -> BearingAngles:
    """Lead and aspect angles from headings and the LOS direction.

    heading_attacker = lead + los and heading_target = aspect + reversed(los);
    both results are normalized to [-pi, pi).
    """
    rev = reverse_los(los)
    return BearingAngles(
        lead=wrap_angle(attacker_heading - los),
        aspect=wrap_angle(target_heading - rev),
        los_rev=rev,
    )


def relative_velocity(angles: BearingAngles, v_attacker: float, v_target: float) -> tuple[float, float]:
    """LOS-frame relative velocity components.

    v_r = V_T cos(aspect) - V_A cos(lead), v_los = V_T sin(aspect) - V_A sin(lead).
    """
    v_r = v_target * math.cos(angles.aspect) - v_attacker * math.cos(angles.lead)
    v_los = v_target * math.sin(angles.aspect) - v_attacker * math.sin(angles.lead)
    return v_r, v_los


def relative_derivatives(
    rel: RelativeState,
    a_mr: float,
    a_mlos: float,
    a_tr: float,
    a_tlos: float,
    r_min: float = 0.0,
) -> tuple[float, float]:
    """Time derivatives of (v_r, v_los) given LOS-frame accelerations."""
    if rel.r <= r_min:
        raise ValueError(f"range {rel.r} at or below singular threshold {r_min}")
    dv_r = rel.v_los**2 / rel.r - a_mr + a_tr
    dv_los = -rel.v_los * rel.v_r / rel.r - a_mlos + a_tlos
    return dv_r, dv_los


def decompose_target_accel(a_t: float, aspect: float) -> tuple[float, float]:
    """Split the target's lateral acceleration into LOS components:
    (-a_t sin(aspect), a_t cos(aspect))."""
    return -a_t * math.sin(aspect), a_t * math.cos(aspect)


@dataclass
class Maneuver:
    """Target maneuver model.

    kind "none": zero lateral acceleration.
    kind "sinusoid": a_t(t) = amplitude * sin(frequency * t).
    kind "exogenous": a_t' = pole * a_t with a_t(0) = initial, pole <= 0.
    """

    kind: str = "none"
    amplitude: float = 0.1
    frequency: float = 10.0
    pole: float = 0.0
    initial: float = 0.0

    KINDS = ("none", "sinusoid", "exogenous")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown maneuver kind {self.kind!r}")


def target_accel_profile(t: float, maneuver: Maneuver) -> float:
    """Ground-truth target lateral acceleration at time t."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if maneuver.kind == "none":
        return 0.0
    if maneuver.kind == "sinusoid":
        return maneuver.amplitude * math.sin(maneuver.frequency * t)
    # exogenous: closed form of the linear decay
    return maneuver.initial * math.exp(maneuver.pole * t)


def advance_headings(
    gamma_a: float,
    a_m: float,
    v_a: float,
    gamma_t: float,
    a_t: float,
    v_t: float,
    h: float,
) -> tuple[float, float]:
    """Advance both headings over one step of size h with the turn-rate
    kinematics gamma' = a / V (exact for constant lateral acceleration)."""
    if h <= 0:
        raise ValueError("step size must be positive")
    return wrap_angle(gamma_a + h * a_m / v_a), wrap_angle(gamma_t + h * a_t / v_t)


def reconstruct_position(target_x: float, target_y: float, r: float, los: float) -> tuple[float, float]:
    """Attacker inertial position given the target position and the
    attacker's (range, LOS angle); the attacker-to-target ray has angle los."""
    return target_x - r * math.cos(los), target_y - r * math.sin(los)
