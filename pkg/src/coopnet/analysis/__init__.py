"""Attractors, joint trajectories, chaos metrics and closed-form bounds."""

from __future__ import annotations

from coopnet.analysis.attractors import (
    DEFAULT_STEP_BUDGET,
    AttractorInfo,
    CensusEntry,
    DetectionMethod,
    attractor_census,
    cycle_states,
    find_attractor,
)
from coopnet.analysis.bounds import n_alpha_p_threshold, q_upper_bound
from coopnet.analysis.joint import (
    ChainSum,
    JointCycleReport,
    chain_sum_invariant,
    coalescence_test,
    joint_cycle_analysis,
)
from coopnet.analysis.metrics import (
    Metric,
    MetricReport,
    MetricSummary,
    SampleRecord,
    Verdict,
    estimate_alpha_q_decoherence,
    estimate_coalescence,
    estimate_decoherence,
    estimate_instability,
    estimate_p_c_chaos,
    write_sample_log,
)
from coopnet.analysis.sampling import CodingStates, FlipDirection, FlipPairs, UniformStates

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "AttractorInfo",
    "CensusEntry",
    "ChainSum",
    "CodingStates",
    "DetectionMethod",
    "FlipDirection",
    "FlipPairs",
    "JointCycleReport",
    "Metric",
    "MetricReport",
    "MetricSummary",
    "SampleRecord",
    "UniformStates",
    "Verdict",
    "attractor_census",
    "chain_sum_invariant",
    "coalescence_test",
    "cycle_states",
    "estimate_alpha_q_decoherence",
    "estimate_coalescence",
    "estimate_decoherence",
    "estimate_instability",
    "estimate_p_c_chaos",
    "find_attractor",
    "joint_cycle_analysis",
    "n_alpha_p_threshold",
    "q_upper_bound",
    "write_sample_log",
]
