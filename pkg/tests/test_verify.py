"""Tests for degree profiles and cooperativity certificates."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from coopnet.analysis import attractor_census, cycle_states
from coopnet.coding import RobustScheme
from coopnet.constructions import build_copy_tape, random_wired_network
from coopnet.errors import DimensionCapError, StructuralInconsistencyError
from coopnet.netcore import Comparison, Node, RuleNetwork, State, WiredNetwork, comparable
from coopnet.verify import (
    CheckMode,
    Verdict,
    check_cooperativity_global,
    check_cooperativity_local,
    check_cooperativity_pairwise,
    degree_profile,
)


def not_net() -> WiredNetwork:
    return WiredNetwork(1, (Node((0,), "10"),))


def test_and_or_network_is_cooperative():
    """All three modes certify an AND/OR network."""
    net = WiredNetwork.from_tables([((0, 1), "0001"), ((0, 1), "0111"), ((2,), "01")])
    assert check_cooperativity_local(net).is_cooperative
    assert check_cooperativity_global(net).verdict is Verdict.COOPERATIVE
    assert check_cooperativity_pairwise(net)


def test_negation_is_refuted_in_every_mode():
    """A negated self-input is refuted with the same witness by all modes."""
    net = not_net()
    for certificate in (
        check_cooperativity_local(net),
        check_cooperativity_global(net),
        check_cooperativity_pairwise(net),
    ):
        assert not certificate
        assert certificate.witness == (State(0, 1), 0)
    assert check_cooperativity_global(net).mode is CheckMode.GLOBAL_EXHAUSTIVE


def test_global_witness_is_a_real_violation():
    """The reported raise of bit i makes some successor coordinate drop."""
    table = [0b11, 0b10, 0b01, 0b11]
    net = RuleNetwork.from_table(table, 2)
    certificate = check_cooperativity_global(net)
    assert not certificate.is_cooperative
    assert certificate.witness is not None
    s, i = certificate.witness
    assert s[i] == 0
    assert table[s.bits] & ~table[s.bits | 1 << i]


def test_certificate_to_dict():
    """Refutations serialise their witness as a state string and bit."""
    data = check_cooperativity_global(not_net()).to_dict()
    assert data == {
        "verdict": "not-cooperative",
        "mode": "global-exhaustive",
        "witness": {"state": "0", "bit": 0},
    }


def test_global_check_refuses_large_dimensions():
    """The exhaustive check stops above its dimension cap."""
    with pytest.raises(DimensionCapError, match="exceeds the cap"):
        check_cooperativity_global(WiredNetwork.identity(25))
    with pytest.raises(DimensionCapError):
        check_cooperativity_pairwise(WiredNetwork.identity(9))


def test_pairwise_check_reduces_to_single_bit_witness():
    """A violation between distant comparable states is reduced to one raised bit."""
    # f(00) = 01, f(11) = 00 and the middle states stay at 01
    net = RuleNetwork.from_table([0b01, 0b01, 0b01, 0b00], 2)
    certificate = check_cooperativity_pairwise(net)
    assert not certificate
    assert certificate.witness is not None
    s, i = certificate.witness
    assert s.bits & 1 << i == 0
    assert net.apply(s.bits) & ~net.apply(s.bits | 1 << i)


def test_self_loops_count_toward_both_degrees():
    """A node reading itself has one in- and one out-edge from the loop."""
    net = WiredNetwork(2, (Node.copy_of(0), Node.and_of(0, 1)))
    profile = degree_profile(net)
    assert profile.indegrees == (1, 2)
    assert profile.outdegrees == (2, 1)
    assert profile.is_biquadratic
    assert not profile.is_strictly_biquadratic


def test_copy_tape_is_strictly_biquadratic():
    """Every variable of a closed copy tape has in- and outdegree exactly 2."""
    net = build_copy_tape(RobustScheme(4, 1), 3)
    profile = degree_profile(net)
    assert profile.is_strictly_biquadratic
    assert set(profile.outdegrees) == {2}
    assert profile.to_dict()["strict"] is True


def test_input_variables_are_exempt_from_strictness():
    """Declared external inputs may have indegree 0."""
    net = WiredNetwork(3, (Node.constant(), Node.constant(), Node.and_of(0, 1)))
    assert not degree_profile(net).is_strictly_biquadratic
    profile = degree_profile(net, input_vars=(0, 1))
    assert profile.is_biquadratic
    assert profile.is_strictly_biquadratic


def test_fan_in_above_two_is_not_biquadratic():
    """Three inputs to one node break the bi-quadratic bound."""
    net = WiredNetwork.from_tables([((0, 1, 2), "00000001"), ((0,), "01"), ((1,), "01")])
    assert not degree_profile(net).is_biquadratic


def test_closed_network_with_uneven_outdegrees_is_inconsistent():
    """Indegree 2 everywhere but outdegrees 3 and 1 cannot pass as strict."""
    net = WiredNetwork.from_tables([((0, 1), "0001"), ((0, 0), "0001")])
    with pytest.raises(StructuralInconsistencyError, match="outdegree"):
        degree_profile(net)


def perturbed_monotone_network(n: int, rng: np.random.Generator) -> WiredNetwork:
    """Random monotone wired network with one table entry flipped half of the time."""
    net = random_wired_network(n, 2, rng, monotone=True)
    if rng.random() < 0.5:  # noqa: PLR2004
        i = int(rng.integers(n))
        node = net.nodes[i]
        j = int(rng.integers(len(node.table)))
        table = node.table[:j] + str(1 - int(node.table[j])) + node.table[j + 1 :]
        nodes = list(net.nodes)
        nodes[i] = Node(node.inputs, table)
        net = WiredNetwork(n, tuple(nodes))
    return net


@pytest.mark.parametrize("seed", range(10))
def test_local_certificate_implies_global(seed):
    """Whenever every table is monotone the whole map is monotone."""
    rng = np.random.default_rng(seed)
    for n in (4, 8, 12):
        net = perturbed_monotone_network(n, rng)
        if check_cooperativity_local(net):
            assert check_cooperativity_global(net)


@pytest.mark.parametrize("seed", range(10))
def test_cover_criterion_matches_pairwise_definition(seed):
    """Single-bit raises find a violation exactly when some comparable pair has one."""
    rng = np.random.default_rng(seed)
    for n in range(3, 9):
        net = perturbed_monotone_network(n, rng)
        cover = check_cooperativity_global(net)
        pairwise = check_cooperativity_pairwise(net)
        assert cover.is_cooperative == pairwise.is_cooperative
        for certificate in (cover, pairwise):
            if certificate.witness is not None:
                s, i = certificate.witness
                assert net.apply(s.bits) & ~net.apply(s.bits | 1 << i)


@pytest.mark.parametrize("seed", range(5))
def test_attractor_states_are_pairwise_incomparable(seed):
    """Distinct states on one attractor of a cooperative network are never ordered."""
    net = random_wired_network(10, 2, np.random.default_rng(seed), monotone=True)
    assert check_cooperativity_global(net)
    for entry in attractor_census(net):
        states = cycle_states(net, entry.attractor)
        for a, b in combinations(states, 2):
            assert comparable(a, b) is Comparison.INCOMPARABLE
