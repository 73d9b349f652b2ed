"""States, networks, synchronous simulation and network documents."""

from __future__ import annotations

from coopnet.netcore.state import Comparison, State, comparable, hamming, leq
from coopnet.netcore.network import (
    BooleanNetwork,
    ConstructionSource,
    Node,
    RuleNetwork,
    TableRule,
    Trajectory,
    TransitionRule,
    WiredNetwork,
    simulate,
    step,
)
from coopnet.netcore.serialization import (
    dumps_network,
    load_network,
    loads_network,
    save_network,
)

__all__ = [
    "BooleanNetwork",
    "Comparison",
    "ConstructionSource",
    "Node",
    "RuleNetwork",
    "State",
    "TableRule",
    "Trajectory",
    "TransitionRule",
    "WiredNetwork",
    "comparable",
    "dumps_network",
    "hamming",
    "leq",
    "load_network",
    "loads_network",
    "save_network",
    "simulate",
    "step",
]
