"""Cooperative encirclement guidance simulation.

Multiple constant-speed attackers drive the area they enclose around a
faster, maneuvering target to zero while synchronizing their ranges and
closing rates, using only neighbor-to-neighbor communication over a directed
graph.  Two guidance modes are provided: known target acceleration, and a
distributed disturbance observer that estimates it.
"""

from .engagement import AttackerConfig, Maneuver, RelativeState, TargetState
from .guidance import GuidanceParams
from .presets import PRESETS, example1, example2
from .sim import ScenarioConfig, Trace, run, simultaneity_metrics
from .topology import CommGraph

__all__ = [
    "AttackerConfig",
    "CommGraph",
    "GuidanceParams",
    "Maneuver",
    "PRESETS",
    "RelativeState",
    "ScenarioConfig",
    "TargetState",
    "Trace",
    "example1",
    "example2",
    "run",
    "simultaneity_metrics",
]
