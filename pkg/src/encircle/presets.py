"""Built-in scenario presets.

Both presets use four 0.7 km/s attackers against a 1 km/s target and the
directed ring 1 -> 2 -> 3 -> 4 -> 1 with unit weights, which contains a
spanning tree rooted at any node.
"""

from __future__ import annotations

import numpy as np

from .engagement import AttackerConfig, Maneuver, TargetState
from .guidance import GuidanceParams
from .sim import ScenarioConfig
from .topology import CommGraph

_ATTACKERS = [
    # (los0, heading0, r0)
    (-0.8851, 0.6283, 7.1063),
    (0.6528, -1.0472, 10.7005),
    (-1.3135, -1.0472, 9.8234),
    (1.2178, 1.5708, 10.1242),
]

_ATTACKER_SPEED = 0.7
_TARGET_SPEED = 1.0
_TARGET_XY = (6.5, 0.5)


def _ring(n: int) -> CommGraph:
    w = np.zeros((n, n))
    for i in range(n):
        w[(i + 1) % n, i] = 1.0
    return CommGraph(w)


def _attackers() -> list[AttackerConfig]:
    return [
        AttackerConfig(speed=_ATTACKER_SPEED, heading0=g, r0=r, los0=l)
        for l, g, r in _ATTACKERS
    ]


def example1() -> ScenarioConfig:
    """Known target acceleration, sinusoidally weaving target."""
    att = _attackers()
    return ScenarioConfig(
        attackers=att,
        target=TargetState(x=_TARGET_XY[0], y=_TARGET_XY[1], heading=1.0472,
                           speed=_TARGET_SPEED),
        maneuver=Maneuver(kind="sinusoid", amplitude=0.1, frequency=10.0),
        graph=_ring(4),
        params=GuidanceParams(
            normal_gain=4.0, tangent_gain=4.0, closing_speed=0.0,
            accel_pole=0.0, initial_ranges=np.array([a.r0 for a in att]),
        ),
        mode="known_accel",
        info_mode="omniscient",
        mu0=1.0,
        t_end=20.0,
    )


def example2() -> ScenarioConfig:
    """Unknown target acceleration estimated by the distributed observer;
    the target acceleration decays exponentially with pole -2."""
    att = _attackers()
    return ScenarioConfig(
        attackers=att,
        target=TargetState(x=_TARGET_XY[0], y=_TARGET_XY[1], heading=-1.0472,
                           speed=_TARGET_SPEED),
        maneuver=Maneuver(kind="exogenous", pole=-2.0, initial=0.1),
        graph=_ring(4),
        params=GuidanceParams(
            normal_gain=5.0, tangent_gain=5.0, closing_speed=0.0,
            accel_pole=-2.0, initial_ranges=np.array([a.r0 for a in att]),
        ),
        mode="observer",
        info_mode="omniscient",
        mu0=1.0,
        z0=0.0,
        t_end=25.0,
    )


PRESETS = {
    "example1": example1,
    "example2": example2,
}
