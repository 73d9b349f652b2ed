from __future__ import annotations

import pytest

from coopnet.coding import RobustScheme
from coopnet.constructions import (
    DecoherenceFamilyParams,
    OscillatingParams,
    build_counter_tape_network,
    build_decoherence_family_network,
    build_oscillating_network,
)
from coopnet.netcore import RuleNetwork


@pytest.fixture(scope="session")
def decofam_params() -> DecoherenceFamilyParams:
    return DecoherenceFamilyParams(n=20, z=3, w=8, u=12, length=3, alpha=0.25)


@pytest.fixture(scope="session")
def decofam_net(decofam_params: DecoherenceFamilyParams) -> RuleNetwork:
    return build_decoherence_family_network(decofam_params)


@pytest.fixture(scope="session")
def oscillating_net() -> RuleNetwork:
    return build_oscillating_network(OscillatingParams(n=10, length=4, seed=7))


@pytest.fixture(scope="session")
def counter_net() -> RuleNetwork:
    return build_counter_tape_network((5, 4), RobustScheme(4, 2))
