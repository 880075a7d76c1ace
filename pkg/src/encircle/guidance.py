"""Cooperative guidance laws and the enclosing-area functional.

Two laws share the same transverse (normal to LOS) channel, which shrinks the
weighted area spanned by pairs of LOS vectors; they differ in the tangential
channel:

* known-acceleration law: uses the true target acceleration and drives every
  closing rate to -closing_speed while ranges synchronize and shrink,
* observer law: replaces the target acceleration by a per-attacker estimate
  from a distributed disturbance observer and drives closing rates to zero.

All functions are vectorized over the attacker group; per-attacker values are
obtained by indexing.  Angles rad, distances km, times s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .engagement import wrap_angle

Array = NDArray[np.float64]


@dataclass
class GuidanceParams:
    """Gains and constants shared by both laws.

    normal_gain must exceed 1 for the transverse channel to be dissipative;
    tangent_gain is the closing-rate damping; closing_speed is the commanded
    terminal closing-rate magnitude (known-acceleration law only);
    accel_pole is the decay constant of the exogenous target-acceleration
    model (observer law); initial_ranges normalizes the coupling terms.
    """

    normal_gain: float
    tangent_gain: float
    closing_speed: float = 0.0
    accel_pole: float = 0.0
    initial_ranges: Array = field(default_factory=lambda: np.array([]))

    def __post_init__(self) -> None:
        self.initial_ranges = np.asarray(self.initial_ranges, dtype=np.float64)
        errors = self.validation_errors()
        if errors:
            raise ValueError("; ".join(errors))

    def validation_errors(self) -> list[str]:
        errs = []
        if not self.normal_gain > 1:
            errs.append(f"normal_gain must be > 1, got {self.normal_gain}")
        if not self.tangent_gain > 0:
            errs.append(f"tangent_gain must be > 0, got {self.tangent_gain}")
        if self.closing_speed < 0:
            errs.append(f"closing_speed must be >= 0, got {self.closing_speed}")
        if self.accel_pole > 0:
            errs.append(f"accel_pole must be <= 0, got {self.accel_pole}")
        if np.any(self.initial_ranges <= 0):
            errs.append("initial_ranges must be positive")
        return errs


@dataclass
class AdaptiveState:
    """Adaptive parameters, one per attacker.  Their sign is invariant along
    a trajectory (the rate is proportional to the parameter itself)."""

    mu: Array


@dataclass
class ObserverState:
    """Virtual states of the distributed disturbance observer: per-attacker
    estimates of the target's lateral acceleration."""

    z: Array


@dataclass
class PairGeometry:
    """Geometry of one ordered attacker pair: LOS-angle difference, baseline
    length and the inertial bearing of the baseline."""

    theta: float
    baseline: float
    bearing: float


@dataclass
class ControlOutput:
    """LOS-frame acceleration command for one attacker."""

    a_mr: float
    a_mlos: float


def pair_thetas(los: Array) -> Array:
    """Matrix of wrapped LOS-angle differences, theta[i, j] = los_j - los_i."""
    d = los[None, :] - los[:, None]
    return (d + np.pi) % (2.0 * np.pi) - np.pi


def coupling_weights(r: Array, los: Array, weights: Array, r0: Array) -> Array:
    """Normalizing weight of the transverse channel for every attacker:
    1 + sum_j a_ij (r_i r_j sin theta_ij)^2 / (r0_i^2 r0_j^2).  Always >= 1."""
    cross = r[:, None] * r[None, :] * np.sin(pair_thetas(los))
    norm = r0[:, None] ** 2 * r0[None, :] ** 2
    return 1.0 + np.sum(weights * cross**2 / norm, axis=1)


def _transverse_sum(r: Array, v_los: Array, speeds: Array, v_target: float,
                    weights: Array, r0: Array) -> Array:
    """Coupling sum of the transverse channel before gain and normalization:
    sum_j a_ij v_los_i (V_T r_i r_j^2 + V_T r_i^2 r_j + V_i r_i r_j^2
    + V_j r_i^2 r_j) / (r0_i^2 r0_j^2)."""
    ri, rj = r[:, None], r[None, :]
    vi, vj = speeds[:, None], speeds[None, :]
    mix = ri * rj * ((v_target + vi) * rj + (v_target + vj) * ri)
    norm = r0[:, None] ** 2 * r0[None, :] ** 2
    return v_los * np.sum(weights * mix / norm, axis=1)


def known_accel_law(
    r: Array,
    los: Array,
    v_r: Array,
    v_los: Array,
    speeds: Array,
    v_target: float,
    weights: Array,
    p: GuidanceParams,
    a_tr: Array,
    a_tlos: Array,
) -> tuple[Array, Array]:
    """Cooperative law with known target acceleration.

    Returns (a_mr, a_mlos) for all attackers.  In closed loop the tangential
    channel reduces exactly to v_r' = -tangent_gain (v_r + closing_speed) - r
    and the transverse channel to the pure coupling decay; every nonlinear
    kinematic term cancels.
    """
    w = coupling_weights(r, los, weights, p.initial_ranges)
    coup = _transverse_sum(r, v_los, speeds, v_target, weights, p.initial_ranges)
    a_mlos = -v_r * v_los / r + a_tlos + p.normal_gain * coup / w
    a_mr = v_los**2 / r + a_tr + p.tangent_gain * (v_r + p.closing_speed) + r
    return a_mr, a_mlos


def adaptive_rate(mu: Array, r: Array, v_r: Array, closing_speed: float) -> Array:
    """Rate of the adaptive parameter:
    mu' = mu r (v_r + c) / (1 + (v_r + c)^2)."""
    off = v_r + closing_speed
    return mu * r * off / (1.0 + off**2)


def observer_coefficients(
    r: Array, los: Array, aspect: Array, weights: Array, r0: Array
) -> tuple[Array, Array]:
    """Disturbance-observer input gains: (coupling weight * cos(aspect),
    -sin(aspect))."""
    w = coupling_weights(r, los, weights, r0)
    return w * np.cos(aspect), -np.sin(aspect)


def observer_rate(z: Array, pole: float, sigma1: Array, sigma2: Array,
                  v_los: Array, v_r: Array) -> Array:
    """Observer virtual-state rate: z' = pole z + sigma1 v_los + sigma2 v_r."""
    return pole * z + sigma1 * v_los + sigma2 * v_r


def observer_law(
    r: Array,
    los: Array,
    v_r: Array,
    v_los: Array,
    speeds: Array,
    v_target: float,
    weights: Array,
    p: GuidanceParams,
    aspect: Array,
    z: Array,
) -> tuple[Array, Array]:
    """Cooperative law driven by the observer estimate of the target's
    lateral acceleration.

    The estimate replaces the true acceleration through the same LOS
    decomposition, and the tangential channel has no closing-speed bias:
    in closed loop v_r' = residual - tangent_gain v_r - r, where residual is
    the estimation error projected on the LOS.
    """
    est_a_tr = -z * np.sin(aspect)
    est_a_tlos = z * np.cos(aspect)
    w = coupling_weights(r, los, weights, p.initial_ranges)
    coup = _transverse_sum(r, v_los, speeds, v_target, weights, p.initial_ranges)
    a_mlos = -v_r * v_los / r + est_a_tlos + p.normal_gain * coup / w
    a_mr = v_los**2 / r + est_a_tr + p.tangent_gain * v_r + r
    return a_mr, a_mlos


def enclosing_area(r: Array, los: Array, weights: Array) -> float:
    """Weighted area enclosed by the attacker group around the target:
    (1/4) sum_ij a_ij |r_i r_j sin theta_ij|."""
    cross = r[:, None] * r[None, :] * np.sin(pair_thetas(los))
    return 0.25 * float(np.sum(weights * np.abs(cross)))


def pair_geometry(xi: float, yi: float, xj: float, yj: float, los_i: float, los_j: float) -> PairGeometry:
    """Pair geometry from the two attacker positions and LOS angles."""
    dx, dy = xj - xi, yj - yi
    return PairGeometry(
        theta=wrap_angle(los_j - los_i),
        baseline=float(np.hypot(dx, dy)),
        bearing=float(np.arctan2(dy, dx)),
    )
