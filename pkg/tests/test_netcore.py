"""Tests for states, networks and network documents."""

from __future__ import annotations

import json

import numpy as np
import pytest

from coopnet.errors import DimensionMismatchError, NetworkFormatError
from coopnet.netcore import (
    Comparison,
    Node,
    RuleNetwork,
    State,
    WiredNetwork,
    comparable,
    dumps_network,
    hamming,
    leq,
    load_network,
    loads_network,
    save_network,
    simulate,
    step,
)


def and_or_net() -> WiredNetwork:
    """x0' = x0 AND x1, x1' = x0 OR x1."""
    return WiredNetwork.from_tables([((0, 1), "0001"), ((0, 1), "0111")])


def test_state_string_and_subset_views():
    """The string form lists coordinate 0 first; subsets are zero-based."""
    s = State.from_string("0111")
    assert s.bits == 0b1110  # noqa: PLR2004
    assert s.subset() == frozenset({1, 2, 3})
    assert s.weight == 3  # noqa: PLR2004
    assert s.to_string() == "0111"
    assert s.to_hex() == "e"
    assert State.from_subset({1, 2, 3}, 4) == s
    assert State.from_hex("e", 4) == s
    assert s[0] == 0
    assert s[3] == 1


def test_state_rejects_bad_input():
    """Out-of-range bits and foreign characters are refused."""
    with pytest.raises(ValueError, match="do not fit"):
        State(16, 4)
    with pytest.raises(ValueError, match="only contain"):
        State.from_string("01a1")
    with pytest.raises(IndexError):
        State.zeros(3).flip(3)


def test_hamming_and_order():
    """Hamming distance, coordinatewise order and the four comparison outcomes."""
    s = State.from_string("1100")
    t = State.from_string("1110")
    u = State.from_string("0011")
    assert hamming(s, t) == 1
    assert hamming(s, u) == 4  # noqa: PLR2004
    assert leq(s, t)
    assert not leq(t, s)
    assert comparable(s, t) is Comparison.LESS
    assert comparable(t, s) is Comparison.GREATER
    assert comparable(s, s) is Comparison.EQUAL
    assert comparable(s, u) is Comparison.INCOMPARABLE


def test_dimension_mismatch_is_an_error():
    """Comparing states of different dimension raises."""
    with pytest.raises(DimensionMismatchError):
        hamming(State.zeros(3), State.zeros(4))
    with pytest.raises(DimensionMismatchError):
        step(WiredNetwork.identity(3), State.zeros(4))


def test_node_truth_table_indexing():
    """The first listed input is the least significant table bit."""
    node = Node((2, 0), "0100")
    # index 1 means inputs[0] (coordinate 2) on, inputs[1] (coordinate 0) off
    assert node.evaluate(0b100) == 1
    assert node.evaluate(0b001) == 0
    assert node.evaluate(0b101) == 0
    with pytest.raises(ValueError, match="does not match"):
        Node((0, 1), "01")


def test_wired_step_and_transition_table():
    """Synchronous update of a two-node AND/OR network."""
    net = and_or_net()
    assert step(net, State.from_string("10")) == State.from_string("01")
    assert net.transition_table().tolist() == [0, 2, 2, 3]
    states = np.arange(4, dtype=np.uint64)
    assert net.step_many(states).tolist() == [net.apply(int(x)) for x in states]


def test_identity_and_constant_networks():
    """Identity keeps every state; a constant network maps everything to one state."""
    s = State.from_string("10110")
    assert step(WiredNetwork.identity(5), s) == s
    assert step(WiredNetwork.constant(5, 1), s) == State.ones(5)


def test_simulate_returns_all_states():
    """A trajectory of t steps holds t + 1 states."""
    net = RuleNetwork.from_table([1, 2, 3, 0], 2)
    trajectory = simulate(net, State.zeros(2), 5)
    assert len(trajectory) == 6  # noqa: PLR2004
    assert trajectory.steps == 5  # noqa: PLR2004
    assert [s.bits for s in trajectory] == [0, 1, 2, 3, 0, 1]
    with pytest.raises(ValueError, match="non-negative"):
        simulate(net, State.zeros(2), -1)


def test_long_simulation_uses_lookup():
    """Lookup-based stepping agrees with direct application."""
    net = and_or_net()
    trajectory = simulate(net, State.from_string("10"), 100)
    assert trajectory[-1] == State.from_string("01")


def test_wiring_graph_counts_multi_edges():
    """Each listed input becomes one edge of the wiring multigraph."""
    net = WiredNetwork.from_tables([((0, 1), "0001"), ((0, 0), "0001")])
    graph = net.wiring_graph()
    assert graph.number_of_edges() == 4  # noqa: PLR2004
    assert net.outdegrees() == [3, 1]
    assert net.indegrees() == [2, 2]


def test_wired_document_round_trip(tmp_path):
    """A saved wired network loads back with identical nodes."""
    net = and_or_net()
    path = save_network(net, tmp_path / "net.json")
    document = json.loads(path.read_text())
    assert document["kind"] == "wired"
    assert document["nodes"][0] == {"inputs": [0, 1], "table": "0001"}
    assert load_network(path) == net


def test_table_document_round_trip():
    """Table networks are stored as their successor list."""
    net = RuleNetwork.from_table([3, 0, 1, 2], 2)
    text = dumps_network(net)
    assert json.loads(text)["next"] == [3, 0, 1, 2]
    assert loads_network(text).transition_table().tolist() == [3, 0, 1, 2]


def test_construction_document_rebuilds_network(counter_net):
    """Construction documents store name and parameters and rebuild bit-exactly."""
    text = dumps_network(counter_net)
    document = json.loads(text)
    assert document["kind"] == "construction"
    assert document["name"] == "counter"
    assert document["params"]["moduli"] == [5, 4]
    rebuilt = loads_network(text)
    assert rebuilt.n == counter_net.n
    np.testing.assert_array_equal(rebuilt.transition_table(), counter_net.transition_table())


def test_unknown_kind_is_rejected():
    """Documents with an unknown kind raise a format error."""
    with pytest.raises(NetworkFormatError):
        loads_network('{"kind": "bogus", "n": 2}')


def test_table_length_error_carries_location():
    """Validation problems are reported with their location."""
    with pytest.raises(NetworkFormatError) as info:
        loads_network('{"kind": "table", "n": 2, "next": [0, 1, 2]}')
    assert info.value.details
    assert "expected 4" in str(info.value)


def test_wired_document_checks_inputs():
    """Nodes may only read coordinates inside the network."""
    text = json.dumps({"kind": "wired", "n": 1, "nodes": [{"inputs": [1], "table": "01"}]})
    with pytest.raises(NetworkFormatError, match="outside"):
        loads_network(text)


def test_unknown_construction_name():
    """An unknown construction name is a format error located at ``name``."""
    text = json.dumps({"kind": "construction", "n": 4, "name": "nope", "params": {}})
    with pytest.raises(NetworkFormatError) as info:
        loads_network(text)
    assert info.value.details[0].loc == ("name",)


def test_invalid_construction_params():
    """Parameter validation errors point into ``params``."""
    text = json.dumps({
        "kind": "construction",
        "n": 8,
        "name": "counter",
        "params": {"moduli": [5], "k": 1, "ell": 2},
    })
    with pytest.raises(NetworkFormatError):
        loads_network(text)


def test_wired_node_table_length_is_checked():
    """A two-input node needs a table of four characters."""
    text = json.dumps({
        "kind": "wired",
        "n": 2,
        "nodes": [{"inputs": [0, 1], "table": "011"}, {"inputs": [0], "table": "01"}],
    })
    with pytest.raises(NetworkFormatError, match="expected 4 for 2 inputs") as info:
        loads_network(text)
    assert any("nodes" in detail.loc for detail in info.value.details)


@pytest.mark.parametrize("seed", range(5))
def test_hamming_is_a_metric(seed):
    """Non-negative, zero only on equal states, symmetric and triangular."""
    rng = np.random.default_rng(seed)
    for _ in range(200):
        s, t, u = (State(int(x), 12) for x in rng.integers(0, 1 << 12, size=3))
        assert hamming(s, t) >= 0
        assert (hamming(s, t) == 0) == (s == t)
        assert hamming(s, t) == hamming(t, s)
        assert hamming(s, u) <= hamming(s, t) + hamming(t, u)


@pytest.mark.parametrize("seed", range(5))
def test_leq_is_a_partial_order(seed):
    """Reflexive, antisymmetric and transitive on random triples over 6 bits."""
    rng = np.random.default_rng(seed)
    for _ in range(500):
        s, t, u = (State(int(x), 6) for x in rng.integers(0, 1 << 6, size=3))
        assert leq(s, s)
        if leq(s, t) and leq(t, s):
            assert s == t
        if leq(s, t) and leq(t, u):
            assert leq(s, u)


def test_step_many_beyond_machine_words():
    """Wide networks step through Python integers instead of uint64 arrays."""
    net = WiredNetwork.identity(70)
    states = [1 << 69, 5, (1 << 70) - 1]
    assert net.step_many(states).tolist() == states
    rotation = WiredNetwork(70, tuple(Node.copy_of((i - 1) % 70) for i in range(70)))
    assert rotation.step_many([1 << 69]).tolist() == [1]
