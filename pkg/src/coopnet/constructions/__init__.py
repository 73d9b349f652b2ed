"""Network and gadget constructions plus the monotone-extension engine."""

from __future__ import annotations

from coopnet.constructions.counter import (
    CounterParams,
    CounterTapeRule,
    build_counter_tape_network,
)
from coopnet.constructions.decoherence import (
    DecoherenceFamilyParams,
    DecoherenceFamilyRule,
    DecoherenceLayout,
    build_decoherence_family_network,
    verify_conditions,
)
from coopnet.constructions.extension import (
    GreatestExtensionRule,
    MonotoneExtensionRule,
    PartialFunction,
    RuledDomain,
    greatest_extension,
    monotone_extension,
)
from coopnet.constructions.gadgets import (
    GadgetKind,
    GadgetSpec,
    build_Bq,
    build_copy_circuit_Bcr,
    build_copy_tape,
    build_fanout_circuit,
    build_recording_tape,
    recording_station_update,
)
from coopnet.constructions.oscillating import (
    OscillatingParams,
    OscillatingRule,
    build_oscillating_network,
)
from coopnet.constructions.random_nets import random_monotone_table, random_wired_network
from coopnet.constructions.registry import REGISTRY, build_construction

__all__ = [
    "REGISTRY",
    "CounterParams",
    "CounterTapeRule",
    "DecoherenceFamilyParams",
    "DecoherenceFamilyRule",
    "DecoherenceLayout",
    "GadgetKind",
    "GadgetSpec",
    "GreatestExtensionRule",
    "MonotoneExtensionRule",
    "OscillatingParams",
    "OscillatingRule",
    "PartialFunction",
    "RuledDomain",
    "build_Bq",
    "build_construction",
    "build_copy_circuit_Bcr",
    "build_copy_tape",
    "build_counter_tape_network",
    "build_decoherence_family_network",
    "build_fanout_circuit",
    "build_oscillating_network",
    "build_recording_tape",
    "greatest_extension",
    "monotone_extension",
    "random_monotone_table",
    "random_wired_network",
    "recording_station_update",
    "verify_conditions",
]
