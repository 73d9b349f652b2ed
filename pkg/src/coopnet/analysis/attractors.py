"""Attractor detection and census."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import StrEnum
import os
from typing import TYPE_CHECKING

import numpy as np

from coopnet.errors import BudgetExceededError, DimensionCapError
from coopnet.log import get_logger
from coopnet.netcore.network import LOOKUP_CAP
from coopnet.netcore.state import State
from coopnet.utils import random_bits


if TYPE_CHECKING:
    from collections.abc import Callable, Hashable

    from coopnet.netcore.network import BooleanNetwork


logger = get_logger("analysis.attractors")

DEFAULT_STEP_BUDGET = 1 << 26
"""Default number of map evaluations allowed for one cycle detection."""

STEP_BUDGET_ENV = "COOPNET_STEP_BUDGET"


def default_step_budget() -> int:
    """Step budget from ``COOPNET_STEP_BUDGET`` or the built-in default."""
    raw = os.environ.get(STEP_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_STEP_BUDGET


class DetectionMethod(StrEnum):
    BRENT = "brent"
    MEMO = "memo"


def brent[T: Hashable](f: Callable[[T], T], x0: T, budget: int) -> tuple[int, int, T]:
    """Brent's cycle detection on the orbit of ``x0``.

    Returns:
        ``(mu, lam, x_mu)``: transient length, period and the first orbit
        element on the cycle

    Raises:
        BudgetExceededError: If more than ``budget`` evaluations of ``f`` are needed
    """
    steps = 0

    def advance(x: T) -> T:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceededError(steps - 1, budget)
        return f(x)

    power = lam = 1
    tortoise = x0
    hare = advance(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = advance(hare)
        lam += 1

    tortoise = hare = x0
    for _ in range(lam):
        hare = advance(hare)
    mu = 0
    while tortoise != hare:
        tortoise = advance(tortoise)
        hare = advance(hare)
        mu += 1
    return mu, lam, tortoise


@dataclass(frozen=True)
class AttractorInfo:
    """Transient, period and canonical identity of an orbit's cycle."""

    transient: int
    """Steps before the orbit enters its cycle."""

    period: int
    """Cycle length."""

    canonical: int
    """Smallest packed state on the cycle."""

    n: int

    @property
    def canonical_id(self) -> tuple[int, int]:
        """Cycle identifier: canonical state plus period."""
        return self.canonical, self.period

    @property
    def canonical_state(self) -> State:
        return State(self.canonical, self.n)


def _cycle_minimum(f: Callable[[int], int], entry: int, period: int) -> int:
    smallest = x = entry
    for _ in range(period - 1):
        x = f(x)
        smallest = min(smallest, x)
    return smallest


def find_attractor(
    net: BooleanNetwork,
    s0: State,
    budget: int | None = None,
    method: DetectionMethod = DetectionMethod.BRENT,
) -> AttractorInfo:
    """Exact transient and period of the orbit of ``s0``.

    Raises:
        BudgetExceededError: If the orbit is not resolved within ``budget`` steps
    """
    net.check_state(s0)
    budget = default_step_budget() if budget is None else budget
    f = net.successor()
    if method is DetectionMethod.MEMO:
        seen: dict[int, int] = {}
        x = s0.bits
        while x not in seen:
            if len(seen) > budget:
                raise BudgetExceededError(len(seen), budget)
            seen[x] = len(seen)
            x = f(x)
        mu = seen[x]
        lam = len(seen) - mu
        entry = x
    else:
        mu, lam, entry = brent(f, s0.bits, budget)
    return AttractorInfo(mu, lam, _cycle_minimum(f, entry, lam), net.n)


def cycle_states(net: BooleanNetwork, info: AttractorInfo) -> list[State]:
    """States of the cycle in update order, starting at the canonical state."""
    states = [info.canonical_state]
    bits = info.canonical
    for _ in range(info.period - 1):
        bits = net.apply(bits)
        states.append(State(bits, net.n))
    return states


@dataclass(frozen=True)
class CensusEntry:
    """One attractor with the number of initial states (or samples) reaching it.

    The attractor's ``transient`` is 0; ``max_transient`` is the longest
    transient observed inside the basin.
    """

    attractor: AttractorInfo
    count: int
    max_transient: int


def attractor_census(
    net: BooleanNetwork,
    *,
    samples: int | None = None,
    seed: int | None = None,
    limit: int = LOOKUP_CAP,
    budget: int | None = None,
) -> list[CensusEntry]:
    """All attractors with basin sizes, or sampled frequencies.

    Without ``samples`` every one of the ``2^n`` states is labelled; with
    ``samples`` that many uniform initial states are drawn, sample ``i`` from
    the stream ``default_rng([seed, i])``.

    Raises:
        DimensionCapError: In exhaustive mode when ``net.n > limit``
    """
    if samples is None:
        return _exhaustive_census(net, limit)
    if seed is None:
        msg = "Sampled census needs a seed"
        raise ValueError(msg)
    counts: Counter[tuple[int, int]] = Counter()
    deepest: dict[tuple[int, int], int] = {}
    for index in range(samples):
        rng = np.random.default_rng([seed, index])
        info = find_attractor(net, State(random_bits(rng, net.n), net.n), budget)
        counts[info.canonical_id] += 1
        deepest[info.canonical_id] = max(deepest.get(info.canonical_id, 0), info.transient)
    return [
        CensusEntry(AttractorInfo(0, period, canonical, net.n), count, deepest[canonical, period])
        for (canonical, period), count in sorted(counts.items())
    ]


def _exhaustive_census(net: BooleanNetwork, limit: int) -> list[CensusEntry]:
    if net.n > limit:
        msg = f"Exhaustive census of 2^{net.n} states exceeds the cap n <= {limit}"
        raise DimensionCapError(msg)
    succ = net.transition_table(limit).tolist()
    size = len(succ)
    label = [-1] * size
    depth = [0] * size
    cycles: list[tuple[int, int]] = []
    for start in range(size):
        if label[start] >= 0:
            continue
        path: list[int] = []
        position: dict[int, int] = {}
        x = start
        while label[x] < 0 and x not in position:
            position[x] = len(path)
            path.append(x)
            x = succ[x]
        if label[x] < 0:
            cycle = path[position[x] :]
            index = len(cycles)
            cycles.append((min(cycle), len(cycle)))
            for y in cycle:
                label[y] = index
            tail = path[: position[x]]
        else:
            tail = path
        current_label, current_depth = label[x], depth[x]
        for y in reversed(tail):
            current_depth += 1
            label[y] = current_label
            depth[y] = current_depth
    counts = Counter(label)
    deepest = [0] * len(cycles)
    for x in range(size):
        deepest[label[x]] = max(deepest[label[x]], depth[x])
    entries = [
        CensusEntry(AttractorInfo(0, period, canonical, net.n), counts[i], deepest[i])
        for i, (canonical, period) in enumerate(cycles)
    ]
    logger.debug("Census of n=%d found %d attractors", net.n, len(entries))
    return sorted(entries, key=lambda entry: entry.attractor.canonical_id)
