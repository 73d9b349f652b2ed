"""Wired gadget circuits: the ones register, copy layers, fanout trees and recording tapes.

External inputs of a fragment are nodes without inputs (constant 0). During
:meth:`GadgetSpec.run` a driver overrides them at every time step.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
import math
from typing import Any

import numpy as np

from coopnet.coding.robust import RobustScheme
from coopnet.errors import DomainError
from coopnet.log import get_logger
from coopnet.netcore import Node, WiredNetwork
from coopnet.netcore.network import state_range
from coopnet.verify import DegreeProfile, degree_profile


logger = get_logger("constructions.gadgets")

EXHAUSTIVE_CAP = 22


class GadgetKind(StrEnum):
    ONES_BQ = "ones_Bq"
    COPY_BCR = "copy_Bcr"
    FANOUT = "fanout"
    RECORDING_TAPE = "recording_tape"


type Drive = Callable[[int], int] | Sequence[int]


@dataclass(frozen=True)
class GadgetSpec:
    """A wired fragment with designated input and output variables."""

    kind: GadgetKind
    network: WiredNetwork
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    depth: int
    """Steps after which the outputs reflect the inputs."""
    params: dict[str, Any] = field(default_factory=dict, hash=False)
    groups: dict[str, tuple[int, ...]] = field(default_factory=dict, hash=False)
    """Named variable groups, e.g. ``o_q`` or the cells of one tape register."""

    @property
    def n(self) -> int:
        return self.network.n

    def degree_profile(self) -> DegreeProfile:
        return degree_profile(self.network, input_vars=self.inputs)

    def inject(self, bits: int, drive_bits: int) -> int:
        """Overwrite the input variables with ``drive_bits`` (bit ``j`` for ``inputs[j]``)."""
        for j, var in enumerate(self.inputs):
            bits = bits & ~(1 << var) | (drive_bits >> j & 1) << var
        return bits

    def read(self, bits: int, variables: Sequence[int] | None = None) -> int:
        """Pack ``variables`` (the outputs by default) of a state, first listed lowest."""
        variables = self.outputs if variables is None else variables
        return sum((bits >> var & 1) << j for j, var in enumerate(variables))

    def run(self, steps: int, initial: int = 0, drive: Drive | None = None) -> list[int]:
        """States at times ``0..steps`` with the inputs driven by ``drive(t)``."""

        def drive_at(t: int) -> int | None:
            match drive:
                case None:
                    return None
                case Sequence():
                    return drive[t % len(drive)]
                case _:
                    return drive(t)

        def settle(bits: int, t: int) -> int:
            value = drive_at(t)
            return bits if value is None else self.inject(bits, value)

        state = settle(initial, 0)
        states = [state]
        for t in range(1, steps + 1):
            state = settle(self.network.apply(state), t)
            states.append(state)
        return states

    def respond(self, word: int) -> int:
        """Outputs after ``depth`` steps with the inputs held at ``word`` from time 0."""
        final = self.run(self.depth, initial=0, drive=[word])[-1]
        return self.read(final)

    def failure_probability(self) -> Fraction:
        """Exact share of initial states for which ``o_q`` is 0 at some ``t >= d``."""
        if self.kind is not GadgetKind.ONES_BQ:
            msg = f"failure_probability is defined for the ones register, not {self.kind}"
            raise TypeError(msg)
        if self.n > EXHAUSTIVE_CAP:
            msg = f"Exhaustive sweep over 2^{self.n} initial states refused (cap {EXHAUSTIVE_CAP})"
            raise DomainError(msg)
        (root,) = self.groups["o_q"]
        states = state_range(0, 1 << self.n)
        failed = np.zeros(len(states), dtype=bool)
        for t in range(1, 2 * self.depth + 2):
            states = self.network.step_many(states)
            if t >= self.depth:
                failed |= (states >> np.uint64(root) & np.uint64(1)) == 0
        return Fraction(int(failed.sum()), 1 << self.n)


def ones_register_depth(q: float) -> int:
    """``max(1, ceil(log2(-log2(1 - q))))``."""
    if not 0 < q < 1:
        msg = f"q must lie in (0, 1), got {q}"
        raise DomainError(msg)
    exponent = -math.log2(1 - q)
    return max(1, math.ceil(math.log2(exponent))) if exponent > 1 else 1


def ones_register_bound(q: float) -> int:
    """Variable bound ``2 * ceil(-log2(1 - q))``."""
    return 2 * math.ceil(-math.log2(1 - q))


def build_Bq(q: float) -> GadgetSpec:  # noqa: N802
    """Binary OR tree whose root ``o_q`` is 1 from time ``d`` on with probability ``>= q``.

    Heap indexing: node ``x`` has children ``2x + 1`` and ``2x + 2``; the root
    ``0`` is ``o_q``. Leaf ``2^d - 1`` is ``i_q`` and holds its value; leaf
    ``2^d - 1 + r`` for ``r >= 1`` ORs itself with internal node ``r - 1``.
    """
    d = ones_register_depth(q)
    internal = (1 << d) - 1
    nodes = [Node.or_of(2 * x + 1, 2 * x + 2) for x in range(internal)]
    nodes.append(Node.copy_of(internal))
    nodes.extend(Node.or_of(internal + r, r - 1) for r in range(1, 1 << d))
    network = WiredNetwork(len(nodes), tuple(nodes))
    logger.debug("Ones register for q=%s: depth %d, %d variables", q, d, network.n)
    return GadgetSpec(
        GadgetKind.ONES_BQ,
        network,
        inputs=(),
        outputs=(0,),
        depth=d,
        params={"q": q},
        groups={"o_q": (0,), "i_q": (internal,), "leaves": tuple(range(internal, network.n))},
    )


def copy_layer(bits: int, m: int) -> int:
    """Pairwise (AND, OR) of a word of even width ``m``."""
    out = 0
    for pair in range(0, m, 2):
        low, high = bits >> pair & 1, bits >> (pair + 1) & 1
        out |= (low & high) << pair | (low | high) << (pair + 1)
    return out


def _copy_width(width: RobustScheme | int) -> int:
    m = width.m if isinstance(width, RobustScheme) else width
    if m < 2 or m % 2:  # noqa: PLR2004
        msg = f"Copy layers need an even word width, got {m}"
        raise DomainError(msg)
    return m


def build_copy_circuit_Bcr(width: RobustScheme | int) -> GadgetSpec:  # noqa: N802
    """Depth-1 layer: output pair ``l`` is (AND, OR) of input pair ``l``.

    Inputs are variables ``0..m-1`` and outputs ``m..2m-1``.
    """
    m = _copy_width(width)
    nodes = [Node.constant() for _ in range(m)]
    for pair in range(0, m, 2):
        nodes.extend((Node.and_of(pair, pair + 1), Node.or_of(pair, pair + 1)))
    return GadgetSpec(
        GadgetKind.COPY_BCR,
        WiredNetwork(2 * m, tuple(nodes)),
        inputs=tuple(range(m)),
        outputs=tuple(range(m, 2 * m)),
        depth=1,
        params={"m": m},
    )


def build_copy_tape(width: RobustScheme | int, registers: int) -> WiredNetwork:
    """Closed ring of copy layers: register ``r`` takes the layer of register ``r + 1``.

    Every variable has in- and outdegree exactly 2.
    """
    m = _copy_width(width)
    if registers < 2:  # noqa: PLR2004
        msg = f"A copy tape needs at least two registers, got {registers}"
        raise DomainError(msg)
    nodes = []
    for r in range(registers):
        source = ((r + 1) % registers) * m
        for pair in range(0, m, 2):
            nodes.extend((
                Node.and_of(source + pair, source + pair + 1),
                Node.or_of(source + pair, source + pair + 1),
            ))
    return WiredNetwork(registers * m, tuple(nodes))


def build_fanout_circuit(copies: int) -> GadgetSpec:
    """Copy tree from input variable 0 to ``copies`` outputs, ``ceil(log2 copies)`` deep.

    Level sizes halve (rounding up) from the outputs back to the single input,
    so every variable feeds at most two others.
    """
    if copies < 1:
        msg = f"Need at least one copy, got {copies}"
        raise DomainError(msg)
    sizes = [copies]
    while sizes[-1] > 1:
        sizes.append(-(-sizes[-1] // 2))
    sizes.reverse()
    nodes = [Node.constant()]
    offsets = [0]
    for level in range(1, len(sizes)):
        parent = offsets[-1]
        offsets.append(len(nodes))
        nodes.extend(Node.copy_of(parent + i // 2) for i in range(sizes[level]))
    last = offsets[-1]
    return GadgetSpec(
        GadgetKind.FANOUT,
        WiredNetwork(len(nodes), tuple(nodes)),
        inputs=(0,),
        outputs=tuple(range(last, last + copies)),
        depth=len(sizes) - 1,
        params={"copies": copies},
    )


def _check_window(window: tuple[int, int], m: int) -> tuple[int, int]:
    low, high = window
    if m % 2 or not 1 <= low <= m // 2 < high <= m:
        msg = f"Window {window} must satisfy 1 <= j <= m/2 < J <= m with m even (m={m})"
        raise DomainError(msg)
    return low, high


def recording_station_update(
    o_word: Sequence[int],
    tape_word: Sequence[int],
    window: tuple[int, int],
    m: int,
) -> tuple[int, ...]:
    """Write-station output for positions ``mu = j..J`` (1-based).

    Position ``mu <= m/2`` ORs the incoming tape bit with ``o_mu``; positions
    above ``m/2`` AND them.
    """
    low, high = _check_window(window, m)
    if len(o_word) != m or len(tape_word) != high - low + 1:
        msg = f"Expected an O-word of width {m} and a tape word of width {high - low + 1}"
        raise DomainError(msg)
    return tuple(
        (cell | o_word[mu - 1]) if mu <= m // 2 else (cell & o_word[mu - 1])
        for mu, cell in zip(range(low, high + 1), tape_word, strict=True)
    )


def build_recording_tape(
    tape_length: int,
    window: tuple[int, int],
    m: int,
    *,
    readout: bool = False,
) -> GadgetSpec:
    """Circular tape of registers over positions ``j..J`` with one write station.

    Variables ``0..m-1`` are the O-word inputs. Register ``r`` occupies the
    next block of ``J - j + 1`` variables; register 0 is the station and
    register ``r > 0`` copies register ``r + 1`` (mod the tape length). With
    ``readout`` the r-lines follow as further inputs, then one r* conjunction
    per position reading the station.
    """
    low, high = _check_window(window, m)
    if tape_length < 2:  # noqa: PLR2004
        msg = f"Tape length must be at least 2, got {tape_length}"
        raise DomainError(msg)
    width = high - low + 1

    def cell(register: int, mu: int) -> int:
        return m + register * width + (mu - low)

    nodes = [Node.constant() for _ in range(m)]
    for register in range(tape_length):
        incoming = (register + 1) % tape_length
        for mu in range(low, high + 1):
            if register:
                nodes.append(Node.copy_of(cell(incoming, mu)))
            elif mu <= m // 2:
                nodes.append(Node.or_of(cell(incoming, mu), mu - 1))
            else:
                nodes.append(Node.and_of(cell(incoming, mu), mu - 1))
    positions = range(low, high + 1)
    groups = {f"register{r}": tuple(cell(r, mu) for mu in positions) for r in range(tape_length)}
    inputs = tuple(range(m))
    outputs = groups["register0"]
    if readout:
        lines = tuple(range(len(nodes), len(nodes) + width))
        nodes.extend(Node.constant() for _ in lines)
        stars = tuple(range(len(nodes), len(nodes) + width))
        nodes.extend(
            Node.and_of(line, cell(0, mu)) for line, mu in zip(lines, positions, strict=True)
        )
        groups |= {"r": lines, "r_star": stars}
        inputs += lines
        outputs = stars
    return GadgetSpec(
        GadgetKind.RECORDING_TAPE,
        WiredNetwork(len(nodes), tuple(nodes)),
        inputs=inputs,
        outputs=outputs,
        depth=1,
        params={"tape_length": tape_length, "window": [low, high], "m": m, "readout": readout},
        groups=groups,
    )
