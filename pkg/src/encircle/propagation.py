"""Distributed reconstruction of target-relative information.

At least one attacker observes the target directly.  Every other attacker
recovers its own range and LOS angle by triangle geometry against an already
informed neighbor: the baseline between two attackers and its inertial
bearing, together with the neighbor's (range, LOS), determine the unknown
pair by the law of cosines and a branch-safe bearing computation.  The
information floods breadth-first along communication edges.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .engagement import wrap_angle
from .topology import CommGraph

Array = NDArray[np.float64]

#: Slack allowed on the sine-rule bound before the geometry is declared
#: inconsistent.
SINE_RULE_TOL = 1e-9


class GeometryError(ValueError):
    """Raised when propagated quantities violate triangle geometry."""


@dataclass
class ObservationSet:
    """Observer indices plus the map of currently known (range, LOS) pairs.

    ``uncovered`` lists nodes a flood could not reach; empty after a
    successful flood.
    """

    observers: frozenset[int]
    known: dict[int, tuple[float, float]]
    uncovered: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not self.observers:
            raise ValueError("at least one observer is required")
        missing = self.observers - self.known.keys()
        if missing:
            raise ValueError(f"observers {sorted(missing)} have no observation")

    @property
    def complete(self) -> bool:
        return not self.uncovered


def propagate_range(r_i: float, baseline: float, los_i: float, bearing: float) -> float:
    """Range of the far attacker by the law of cosines.

    ``baseline`` is the distance between the two attackers and ``bearing``
    the inertial angle of the near-to-far baseline; the angle at the near
    attacker between its LOS and the baseline is los_i - bearing.
    """
    if r_i <= 0:
        raise ValueError("known range must be positive")
    if baseline < 0:
        raise ValueError("baseline must be nonnegative")
    sq = r_i**2 + baseline**2 - 2.0 * r_i * baseline * math.cos(los_i - bearing)
    # sq is a true squared distance; clamp the roundoff negative.
    return math.sqrt(max(sq, 0.0))


def propagate_los(los_i: float, bearing: float, baseline: float, r_j: float, r_i: float) -> float:
    """LOS angle of the far attacker.

    The sine rule gives sin(los_j - los_i) = baseline sin(los_i - bearing) / r_j,
    but its principal branch is wrong whenever the triangle's angle at the
    target exceeds pi/2.  The two-argument arctangent of the target vector
    expressed in the near attacker's LOS frame is correct on every branch and
    agrees with the sine rule where that is valid.
    """
    if r_j <= 0:
        raise ValueError("far range must be positive")
    ratio = baseline * math.sin(los_i - bearing) / r_j
    if abs(ratio) > 1.0 + SINE_RULE_TOL:
        raise GeometryError(
            f"sine-rule argument {ratio} outside [-1, 1]: inconsistent triangle"
        )
    # Target vector seen from the far attacker, in the near attacker's LOS
    # frame: (r_i - baseline cos(los_i - bearing), baseline sin(los_i - bearing)).
    d = los_i - bearing
    delta = math.atan2(baseline * math.sin(d), r_i - baseline * math.cos(d))
    return wrap_angle(los_i + delta)


def pair_geometry_from_positions(xs: Array, ys: Array) -> tuple[Array, Array]:
    """Baseline lengths and bearings for all ordered attacker pairs.

    ``bearings[i, j]`` is the inertial angle of the i-to-j baseline.
    """
    dx = xs[None, :] - xs[:, None]
    dy = ys[None, :] - ys[:, None]
    return np.hypot(dx, dy), np.arctan2(dy, dx)


def flood(g: CommGraph, obs: ObservationSet, baselines: Array, bearings: Array) -> ObservationSet:
    """Flood (range, LOS) knowledge from the observers across the graph.

    Breadth-first over communication edges: node i learns from any informed
    in-neighbor j (weights[i, j] > 0) by one law-of-cosines hop.  Nodes
    unreachable from every observer are reported in ``uncovered``.
    """
    known = dict(obs.known)
    queue = deque(sorted(known))
    receivers = [np.flatnonzero(g.weights[:, j] > 0) for j in range(g.n)]
    while queue:
        j = queue.popleft()
        r_j, los_j = known[j]
        for i in receivers[j]:
            i = int(i)
            if i in known:
                continue
            r_i = propagate_range(r_j, baselines[j, i], los_j, bearings[j, i])
            los_i = propagate_los(los_j, bearings[j, i], baselines[j, i], r_i, r_j)
            known[i] = (r_i, los_i)
            queue.append(i)
    uncovered = frozenset(range(g.n)) - known.keys()
    return ObservationSet(observers=obs.observers, known=known, uncovered=uncovered)
