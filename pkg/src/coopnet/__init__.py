"""Coopnet: main package.

Cooperative Boolean networks: constructions, attractors and chaos metrics.
"""

from __future__ import annotations

from importlib.metadata import version

__version__ = version("coopnet")
__title__ = "Coopnet"

__author__ = "Philipp Temminghoff"
__author_email__ = "philipptemminghoff@googlemail.com"
__copyright__ = "Copyright (c) 2025 Philipp Temminghoff"
__license__ = "MIT"
__url__ = "https://github.com/phil65/coopnet"

from coopnet.analysis import (
    AttractorInfo,
    JointCycleReport,
    MetricReport,
    attractor_census,
    estimate_alpha_q_decoherence,
    estimate_coalescence,
    estimate_decoherence,
    estimate_instability,
    estimate_p_c_chaos,
    find_attractor,
    joint_cycle_analysis,
)
from coopnet.constructions import build_construction
from coopnet.errors import CoopnetError
from coopnet.netcore import (
    BooleanNetwork,
    RuleNetwork,
    State,
    WiredNetwork,
    load_network,
    save_network,
    simulate,
    step,
)
from coopnet.verify import (
    check_cooperativity_global,
    check_cooperativity_local,
    degree_profile,
)

__all__ = [
    "AttractorInfo",
    "BooleanNetwork",
    "CoopnetError",
    "JointCycleReport",
    "MetricReport",
    "RuleNetwork",
    "State",
    "WiredNetwork",
    "__version__",
    "attractor_census",
    "build_construction",
    "check_cooperativity_global",
    "check_cooperativity_local",
    "degree_profile",
    "estimate_alpha_q_decoherence",
    "estimate_coalescence",
    "estimate_decoherence",
    "estimate_instability",
    "estimate_p_c_chaos",
    "find_attractor",
    "joint_cycle_analysis",
    "load_network",
    "save_network",
    "simulate",
    "step",
]
