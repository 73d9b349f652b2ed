"""Kauffman-style random wired networks, optionally with monotone tables."""

from __future__ import annotations

import numpy as np

from coopnet.errors import DomainError
from coopnet.netcore import Node, WiredNetwork


def random_monotone_table(k: int, rng: np.random.Generator) -> str:
    """Truth table of a random monotone function of ``k`` inputs.

    A random set of generator inputs is drawn; the output is 1 exactly on
    inputs lying above some generator.
    """
    size = 1 << k
    inputs = np.arange(size, dtype=np.uint64)
    generators = inputs[rng.random(size) < rng.random()]
    above = np.zeros(size, dtype=bool)
    for g in generators:
        above |= (inputs & g) == g
    return "".join("1" if bit else "0" for bit in above)


def random_table(k: int, rng: np.random.Generator) -> str:
    return "".join(str(int(bit)) for bit in rng.integers(0, 2, size=1 << k))


def random_wired_network(
    n: int,
    indegree: int,
    rng: np.random.Generator,
    *,
    monotone: bool = False,
) -> WiredNetwork:
    """Each node reads ``indegree`` distinct random variables through a random table."""
    if not 0 <= indegree <= n:
        msg = f"Indegree must lie in [0, {n}], got {indegree}"
        raise DomainError(msg)
    nodes = []
    for _ in range(n):
        inputs = tuple(int(v) for v in rng.choice(n, size=indegree, replace=False))
        table = random_monotone_table(indegree, rng) if monotone else random_table(indegree, rng)
        nodes.append(Node(inputs, table))
    return WiredNetwork(n, tuple(nodes))
