"""Wired and rule-based Boolean networks with synchronous update."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any

import networkx as nx
import numpy as np

from coopnet.errors import DimensionCapError, DimensionMismatchError
from coopnet.log import get_logger
from coopnet.netcore.state import State
from coopnet.utils import mask


if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence


logger = get_logger("netcore.network")

LOOKUP_CAP = 20
"""Largest dimension for which stepping goes through a materialised lookup list."""

TABLE_CAP = 24
"""Default cap for materialising a full transition table."""

CHUNK_SIZE = 1 << 20

WORD_BITS = 64
"""Widest state that fits a ``uint64`` array element."""


def state_range(start: int, stop: int) -> np.ndarray:
    return np.arange(start, stop, dtype=np.uint64)


class BooleanNetwork(ABC):
    """Deterministic synchronous map on ``2^n``."""

    n: int

    @abstractmethod
    def apply(self, bits: int) -> int:
        """Successor of a packed state."""

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        """Successors of an array of packed states (``n <= 64``)."""
        values = (self.apply(int(bits)) for bits in states)
        return np.fromiter(values, dtype=np.uint64, count=len(states))

    def check_state(self, s: State) -> None:
        if s.n != self.n:
            msg = f"State of dimension {s.n} given to network of dimension {self.n}"
            raise DimensionMismatchError(msg)

    def step(self, s: State) -> State:
        self.check_state(s)
        return State(self.apply(s.bits), self.n)

    def step_many(self, states: np.ndarray | Sequence[int]) -> np.ndarray:
        """Successors of many packed states; object arrays of ints above 64 bits."""
        if self.n > WORD_BITS:
            out = np.empty(len(states), dtype=object)
            out[:] = [self.apply(int(bits)) for bits in states]
            return out
        return self.apply_many(np.asarray(states, dtype=np.uint64))

    def iter_table_chunks(self, limit: int = TABLE_CAP) -> Iterator[tuple[int, np.ndarray]]:
        """Yield ``(offset, successors)`` chunks covering all ``2^n`` states."""
        if self.n > limit:
            msg = f"Refusing to enumerate 2^{self.n} states (cap is n <= {limit})"
            raise DimensionCapError(msg)
        total = 1 << self.n
        for offset in range(0, total, CHUNK_SIZE):
            yield offset, self.step_many(state_range(offset, min(total, offset + CHUNK_SIZE)))

    def transition_table(self, limit: int = TABLE_CAP) -> np.ndarray:
        """Successor of every state, indexed by the packed state."""
        chunks = [chunk for _, chunk in self.iter_table_chunks(limit)]
        return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint64)

    @cached_property
    def _lookup(self) -> list[int] | None:
        if self.n > LOOKUP_CAP:
            return None
        logger.debug("Materialising lookup table for n=%d", self.n)
        return self.transition_table().tolist()

    def successor(self) -> Callable[[int], int]:
        """Fast packed-state successor function for long trajectories."""
        lookup = self._lookup
        return lookup.__getitem__ if lookup is not None else self.apply


@dataclass(frozen=True)
class Node:
    """One regulated variable: ordered inputs plus a truth table.

    Character ``x`` of ``table`` is the output for the input integer
    ``x = sum(value(inputs[j]) << j)``, i.e. the first listed input is the
    least significant bit.
    """

    inputs: tuple[int, ...]
    table: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if len(self.table) != 1 << len(self.inputs):
            msg = (
                f"Truth table of length {len(self.table)} does not match "
                f"{len(self.inputs)} inputs (expected {1 << len(self.inputs)})"
            )
            raise ValueError(msg)
        if any(char not in "01" for char in self.table):
            msg = f"Truth tables may only contain 0 and 1, got {self.table!r}"
            raise ValueError(msg)

    @property
    def indegree(self) -> int:
        return len(self.inputs)

    @cached_property
    def truth(self) -> int:
        """Table packed so that bit ``x`` is the output for input integer ``x``."""
        return int(self.table[::-1], 2)

    @cached_property
    def table_array(self) -> np.ndarray:
        return np.frombuffer(self.table.encode(), dtype=np.uint8) - ord("0")

    def evaluate(self, bits: int) -> int:
        index = 0
        for j, source in enumerate(self.inputs):
            index |= (bits >> source & 1) << j
        return self.truth >> index & 1

    @classmethod
    def copy_of(cls, source: int) -> Node:
        return cls((source,), "01")

    @classmethod
    def constant(cls, value: int = 0) -> Node:
        return cls((), str(value))

    @classmethod
    def and_of(cls, first: int, second: int) -> Node:
        return cls((first, second), "0001")

    @classmethod
    def or_of(cls, first: int, second: int) -> Node:
        return cls((first, second), "0111")


@dataclass(frozen=True)
class WiredNetwork(BooleanNetwork):
    """Network given node-wise by inputs and truth tables."""

    n: int
    nodes: tuple[Node, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) != self.n:
            msg = f"Wired network of dimension {self.n} needs {self.n} nodes, got {len(self.nodes)}"
            raise ValueError(msg)
        for i, node in enumerate(self.nodes):
            for source in node.inputs:
                if not 0 <= source < self.n:
                    msg = f"Node {i} reads input {source}, outside [0, {self.n})"
                    raise ValueError(msg)

    @classmethod
    def from_tables(cls, spec: Sequence[tuple[Sequence[int], str]]) -> WiredNetwork:
        """Build from ``(inputs, table)`` pairs."""
        nodes = tuple(Node(tuple(inputs), table) for inputs, table in spec)
        return cls(len(nodes), nodes)

    @classmethod
    def identity(cls, n: int) -> WiredNetwork:
        return cls(n, tuple(Node.copy_of(i) for i in range(n)))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> WiredNetwork:
        return cls(n, tuple(Node.constant(value) for _ in range(n)))

    def apply(self, bits: int) -> int:
        out = 0
        for i, node in enumerate(self.nodes):
            out |= node.evaluate(bits) << i
        return out

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        out = np.zeros_like(states)
        for i, node in enumerate(self.nodes):
            index = np.zeros_like(states)
            for j, source in enumerate(node.inputs):
                index |= ((states >> source) & 1) << j
            out |= node.table_array[index].astype(states.dtype) << i
        return out

    def wiring_graph(self) -> nx.MultiDiGraph:
        """Directed multigraph with an edge ``source -> i`` per listed input."""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(
            (source, i) for i, node in enumerate(self.nodes) for source in node.inputs
        )
        return graph

    def indegrees(self) -> list[int]:
        return [node.indegree for node in self.nodes]

    def outdegrees(self) -> list[int]:
        counts = [0] * self.n
        for node in self.nodes:
            for source in node.inputs:
                counts[source] += 1
        return counts


class TransitionRule(ABC):
    """Global update rule of a :class:`RuleNetwork`."""

    n: int

    @abstractmethod
    def apply(self, bits: int) -> int: ...

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        values = (self.apply(int(bits)) for bits in states)
        return np.fromiter(values, dtype=np.uint64, count=len(states))


@dataclass(frozen=True)
class TableRule(TransitionRule):
    """Explicit successor table with ``2^n`` entries."""

    n: int
    next: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "next", tuple(int(value) for value in self.next))
        if len(self.next) != 1 << self.n:
            msg = f"Table of dimension {self.n} needs {1 << self.n} entries, got {len(self.next)}"
            raise ValueError(msg)
        limit = mask(self.n)
        for index, value in enumerate(self.next):
            if not 0 <= value <= limit:
                msg = f"Entry {index} = {value} is not a state of dimension {self.n}"
                raise ValueError(msg)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.next, dtype=np.uint64)

    def apply(self, bits: int) -> int:
        return self.next[bits]

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        return self.array[states]


@dataclass(frozen=True)
class ConstructionSource:
    """How a rule network was produced, enough to rebuild it bit-exactly."""

    name: str
    params: dict[str, Any] = field(hash=False)
    seed: int | None = None


@dataclass(frozen=True)
class RuleNetwork(BooleanNetwork):
    """Network defined by a global rule rather than node-wise tables."""

    n: int
    rule: TransitionRule
    source: ConstructionSource | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.rule.n != self.n:
            msg = f"Rule of dimension {self.rule.n} attached to network of dimension {self.n}"
            raise DimensionMismatchError(msg)

    @classmethod
    def from_table(cls, next_states: Sequence[int], n: int) -> RuleNetwork:
        return cls(n, TableRule(n, tuple(next_states)))

    def apply(self, bits: int) -> int:
        return self.rule.apply(bits)

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        return self.rule.apply_many(states)

    def to_table_network(self, limit: int = TABLE_CAP) -> RuleNetwork:
        """Materialise the rule into an explicit table."""
        table = self.transition_table(limit)
        return RuleNetwork.from_table(table.tolist(), self.n)


@dataclass(frozen=True)
class Trajectory:
    """States visited from ``states[0]``, one synchronous step apart."""

    states: tuple[State, ...]

    @property
    def start(self) -> State:
        return self.states[0]

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __getitem__(self, index: int) -> State:
        return self.states[index]


def step(net: BooleanNetwork, s: State) -> State:
    """One synchronous update of every variable."""
    return net.step(s)


def simulate(net: BooleanNetwork, s0: State, t: int) -> Trajectory:
    """Trajectory of ``t`` steps (``t + 1`` states) starting at ``s0``."""
    if t < 0:
        msg = f"Number of steps must be non-negative, got {t}"
        raise ValueError(msg)
    net.check_state(s0)
    states = [s0]
    successor = net.successor() if t > 64 else net.apply  # noqa: PLR2004
    bits = s0.bits
    for _ in range(t):
        bits = successor(bits)
        states.append(State(bits, net.n))
    return Trajectory(tuple(states))
