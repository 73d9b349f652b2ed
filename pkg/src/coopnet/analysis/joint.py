"""Joint trajectories of two initial states and the cooperative chain invariant."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from coopnet.analysis.attractors import brent, default_step_budget
from coopnet.errors import OrderViolationError
from coopnet.log import get_logger
from coopnet.netcore.state import State, hamming, leq


if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    import numpy as np

    from coopnet.netcore.network import BooleanNetwork


logger = get_logger("analysis.joint")

type Pair = tuple[int, int]


@dataclass(frozen=True)
class JointCycleReport:
    """Cycle structure of the product map ``(s, s*) -> (f(s), f(s*))``.

    ``distances`` holds the Hamming distance at each time of exactly one
    joint period, starting right after the joint transient.
    """

    joint_transient: int
    joint_period: int
    distances: tuple[int, ...]
    coalesced: bool
    coalescence_time: int | None

    @property
    def max_hamming_on_cycle(self) -> int:
        return max(self.distances)

    def frac_hamming_ge(self, threshold: int) -> Fraction:
        """Exact long-run proportion of times with Hamming distance ``>= threshold``."""
        hits = sum(1 for d in self.distances if d >= threshold)
        return Fraction(hits, self.joint_period)


def _joint_report(
    pair_map: Callable[[Pair], Pair],
    start: Pair,
    budget: int,
) -> JointCycleReport:
    mu, lam, entry = brent(pair_map, start, budget)
    distances = []
    pair = entry
    for _ in range(lam):
        distances.append((pair[0] ^ pair[1]).bit_count())
        pair = pair_map(pair)
    coalesced = distances[0] == 0
    coalescence_time = None
    if coalesced:
        pair, time = start, 0
        while pair[0] != pair[1]:
            pair = pair_map(pair)
            time += 1
        coalescence_time = time
    return JointCycleReport(mu, lam, tuple(distances), coalesced, coalescence_time)


def joint_cycle_analysis(
    net: BooleanNetwork,
    s0: State,
    s0_star: State,
    budget: int | None = None,
) -> JointCycleReport:
    """Run cycle detection on the pair of trajectories started at ``s0`` and ``s0_star``.

    Raises:
        BudgetExceededError: If the joint orbit is not resolved within ``budget`` steps
    """
    net.check_state(s0)
    net.check_state(s0_star)
    f = net.successor()

    def pair_map(pair: Pair) -> Pair:
        return f(pair[0]), f(pair[1])

    budget = default_step_budget() if budget is None else budget
    return _joint_report(pair_map, (s0.bits, s0_star.bits), budget)


def coalescence_test(
    net: BooleanNetwork,
    s0: State,
    s0_star: State,
    budget: int | None = None,
) -> JointCycleReport:
    """Track an ordered pair ``s0 < s0_star`` under a cooperative network.

    The pair either becomes equal (coalesced) or its joint orbit closes a
    cycle while still strictly ordered, which is permanent divergence.

    Raises:
        ValueError: If ``s0 < s0_star`` does not hold
        OrderViolationError: If the order is lost, i.e. the network is not cooperative
    """
    if s0 == s0_star or not leq(s0, s0_star):
        msg = f"Coalescence test needs s0 < s0*, got {s0} and {s0_star}"
        raise ValueError(msg)
    f = net.successor()

    def ordered_pair_map(pair: Pair) -> Pair:
        low, high = f(pair[0]), f(pair[1])
        if low & ~high:
            msg = f"Order lost: {low:#x} is not below {high:#x}; network is not cooperative"
            raise OrderViolationError(msg)
        return low, high

    budget = default_step_budget() if budget is None else budget
    return _joint_report(ordered_pair_map, (s0.bits, s0_star.bits), budget)


@dataclass(frozen=True)
class ChainSum:
    """Hamming distances between consecutive images of a flip chain."""

    distances: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.distances)

    def jumps_at_least(self, threshold: int) -> int:
        return sum(1 for d in self.distances if d >= threshold)

    def jump_counts(self, thresholds: Sequence[int]) -> dict[int, int]:
        return {theta: self.jumps_at_least(theta) for theta in thresholds}


def flip_chain(permutation: Sequence[int]) -> list[int]:
    """States ``s^0 < ... < s^n`` with ``s^k = {j : permutation[j] < k}``."""
    n = len(permutation)
    if sorted(permutation) != list(range(n)):
        msg = f"Not a permutation of range({n}): {list(permutation)}"
        raise ValueError(msg)
    chain = [0]
    order = sorted(range(n), key=lambda j: permutation[j])
    for j in order:
        chain.append(chain[-1] | 1 << j)
    return chain


def chain_sum_invariant(
    net: BooleanNetwork,
    permutation: Sequence[int],
    t: int,
) -> ChainSum:
    """Evaluate the flip chain of ``permutation`` at time ``t``.

    Under a cooperative network the images stay nested, so the distances add
    up to at most ``n``.

    Raises:
        OrderViolationError: If the images at time ``t`` are not nested
    """
    if len(permutation) != net.n:
        msg = f"Permutation of length {len(permutation)} given for n={net.n}"
        raise ValueError(msg)
    states: Sequence[int] | np.ndarray = flip_chain(permutation)
    for _ in range(t):
        states = net.step_many(states)
    images = [int(x) for x in states]
    distances = []
    for k, (low, high) in enumerate(zip(images, images[1:])):
        if low & ~high:
            msg = f"Chain images {k} and {k + 1} are not nested at t={t}"
            raise OrderViolationError(msg)
        distances.append(hamming(State(low, net.n), State(high, net.n)))
    return ChainSum(tuple(distances))
