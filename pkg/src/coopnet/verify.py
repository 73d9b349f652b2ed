"""Structural certification: degree profiles and cooperativity."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from itertools import product
from typing import TYPE_CHECKING

import numpy as np

from coopnet.errors import DimensionCapError, StructuralInconsistencyError
from coopnet.log import get_logger
from coopnet.netcore.network import TABLE_CAP, state_range
from coopnet.netcore.state import State
from coopnet.utils import state_dtype


if TYPE_CHECKING:
    from collections.abc import Iterable

    from coopnet.netcore.network import BooleanNetwork, WiredNetwork


logger = get_logger("verify")

PAIRWISE_CAP = 8


@dataclass(frozen=True)
class DegreeProfile:
    """In- and outdegrees of a wired network.

    A self-input counts toward both degrees of its node. Variables listed in
    ``input_vars`` are external inputs of a fragment and are exempt from the
    strictness requirement.
    """

    indegrees: tuple[int, ...]
    outdegrees: tuple[int, ...]
    input_vars: tuple[int, ...] = ()

    @property
    def is_biquadratic(self) -> bool:
        degrees = (*self.indegrees, *self.outdegrees)
        return all(d <= 2 for d in degrees)  # noqa: PLR2004

    @property
    def is_strictly_biquadratic(self) -> bool:
        exempt = set(self.input_vars)
        return self.is_biquadratic and all(
            d == 2 for i, d in enumerate(self.indegrees) if i not in exempt  # noqa: PLR2004
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "indegrees": list(self.indegrees),
            "outdegrees": list(self.outdegrees),
            "biquadratic": self.is_biquadratic,
            "strict": self.is_strictly_biquadratic,
        }


def degree_profile(net: WiredNetwork, input_vars: Iterable[int] = ()) -> DegreeProfile:
    """Exact in/out degree counts of ``net`` from its wiring graph.

    Raises:
        StructuralInconsistencyError: If a closed network is strictly
            bi-quadratic by indegree but some outdegree differs from 2
    """
    graph = net.wiring_graph()
    indegrees = tuple(graph.in_degree(i) for i in range(net.n))
    outdegrees = tuple(graph.out_degree(i) for i in range(net.n))
    profile = DegreeProfile(indegrees, outdegrees, tuple(sorted(input_vars)))
    if not profile.input_vars and all(d == 2 for d in indegrees):  # noqa: PLR2004
        odd = [i for i, d in enumerate(outdegrees) if d != 2]  # noqa: PLR2004
        if odd:
            msg = f"Closed network with indegree 2 everywhere has outdegree != 2 at {odd}"
            raise StructuralInconsistencyError(msg)
    return profile


class Verdict(StrEnum):
    COOPERATIVE = "cooperative"
    NOT_COOPERATIVE = "not-cooperative"


class CheckMode(StrEnum):
    LOCAL = "local"
    GLOBAL_EXHAUSTIVE = "global-exhaustive"
    PAIRWISE = "pairwise"


@dataclass(frozen=True)
class CooperativityCertificate:
    """Verdict of a cooperativity check.

    When refuted, ``witness = (s, i)`` with ``s[i] == 0`` and
    ``f(s)`` not below ``f(s.flip(i))``.
    """

    verdict: Verdict
    mode: CheckMode
    witness: tuple[State, int] | None = None

    @property
    def is_cooperative(self) -> bool:
        return self.verdict is Verdict.COOPERATIVE

    def __bool__(self) -> bool:
        return self.is_cooperative

    def to_dict(self) -> dict[str, object]:
        data: dict[str, object] = {"verdict": str(self.verdict), "mode": str(self.mode)}
        if self.witness is not None:
            state, index = self.witness
            data["witness"] = {"state": state.to_string(), "bit": index}
        return data


def check_cooperativity_local(net: WiredNetwork) -> CooperativityCertificate:
    """Check that every truth table is monotone in each of its inputs.

    Repeated inputs are merged, so every refutation is realised by an actual
    global state: the node's inputs set as in the violating row, all other
    coordinates zero.
    """
    for i, node in enumerate(net.nodes):
        sources = sorted(set(node.inputs))
        for values in product((0, 1), repeat=len(sources)):
            bits = sum(value << source for value, source in zip(values, sources))
            if not node.evaluate(bits):
                continue
            for source, value in zip(sources, values):
                if value == 0 and not node.evaluate(bits | 1 << source):
                    logger.debug("Node %d drops when raising input %d", i, source)
                    witness = (State(bits, net.n), source)
                    return CooperativityCertificate(
                        Verdict.NOT_COOPERATIVE, CheckMode.LOCAL, witness
                    )
    return CooperativityCertificate(Verdict.COOPERATIVE, CheckMode.LOCAL)


def check_cooperativity_global(
    net: BooleanNetwork,
    limit: int = TABLE_CAP,
) -> CooperativityCertificate:
    """Exhaustive single-bit cover check of the synchronous map.

    ``f`` is monotone iff ``f(s) <= f(s | e_i)`` for every ``s`` and every ``i``
    with ``s_i = 0``. The witness with the smallest ``(s, i)`` is reported.

    Raises:
        DimensionCapError: If ``net.n > limit``
    """
    if net.n > limit:
        msg = (
            f"Exhaustive cooperativity check needs 2^{net.n} states; "
            f"dimension {net.n} exceeds the cap {limit}"
        )
        raise DimensionCapError(msg)
    table = net.transition_table(limit).astype(state_dtype(net.n))
    states = state_range(0, 1 << net.n)
    best: tuple[int, int] | None = None
    for i in range(net.n):
        bit = np.uint64(1 << i)
        lower = states[(states & bit) == 0]
        bad = table[lower] & ~table[lower | bit]
        hits = np.flatnonzero(bad)
        if hits.size:
            candidate = (int(lower[hits[0]]), i)
            if best is None or candidate < best:
                best = candidate
    if best is None:
        return CooperativityCertificate(Verdict.COOPERATIVE, CheckMode.GLOBAL_EXHAUSTIVE)
    witness = (State(best[0], net.n), best[1])
    return CooperativityCertificate(Verdict.NOT_COOPERATIVE, CheckMode.GLOBAL_EXHAUSTIVE, witness)


def check_cooperativity_pairwise(
    net: BooleanNetwork,
    limit: int = PAIRWISE_CAP,
) -> CooperativityCertificate:
    """Definition-level check over all comparable pairs ``s <= t`` (``3^n`` pairs).

    A violating pair is reduced to a single-bit raise on a chain between
    its two states, so the witness has the same form as in the other modes.
    """
    if net.n > limit:
        msg = f"Pairwise cooperativity check is capped at n <= {limit}, got n={net.n}"
        raise DimensionCapError(msg)
    table = net.transition_table(limit).tolist()
    full = (1 << net.n) - 1
    for s in range(1 << net.n):
        free = full & ~s
        extra = free
        while extra:
            t = s | extra
            if table[s] & ~table[t]:
                witness = _single_bit_witness(table, s, t, net.n)
                return CooperativityCertificate(
                    Verdict.NOT_COOPERATIVE, CheckMode.PAIRWISE, witness
                )
            extra = (extra - 1) & free
    return CooperativityCertificate(Verdict.COOPERATIVE, CheckMode.PAIRWISE)


def _single_bit_witness(table: list[int], s: int, t: int, n: int) -> tuple[State, int]:
    """Locate a violating single-bit raise on a chain from ``s`` up to ``t``."""
    current = s
    extra = t & ~s
    while extra:
        low = extra & -extra
        if table[current] & ~table[current | low]:
            return State(current, n), low.bit_length() - 1
        current |= low
        extra ^= low
    msg = f"No single-bit violation between {s:#x} and {t:#x}"
    raise StructuralInconsistencyError(msg)
