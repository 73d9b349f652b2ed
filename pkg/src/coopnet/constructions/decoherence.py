"""Cooperative networks with a family of nested long cycles.

Coordinates are zero-based. ``[0, z)`` is the zero control block and
``[z, 2z)`` the one control block; ``U`` and ``W`` are the next two runs of
``J = u - w`` coordinates and ``R`` is everything after them. For ``j`` in
``1..J`` and phase ``i`` in ``1..L`` the cycle state ``s^j(i)`` is

- ``a_i | W_j | ctrl | R`` when ``i < j``,
- ``a_i | W_j | ctrl`` when ``j <= i <= J``,
- ``a_0 | W_j | c_i | ctrl`` when ``i > J``,

where ``a_0 .. a_J`` are the first ``J + 1`` lexicographic ``J/2``-subsets of
``U``, ``W_j`` holds the first ``j`` coordinates of ``W`` and ``c_i`` is the
``i``-th lexicographic ``h``-subset of ``R`` with ``h = ceil(N/2) - (z + J)``.

The set ``Z`` holds states with a one in the zero block, a zero in the one
block and weight in ``w+1 .. u``; a state of weight ``w + j`` in ``Z`` goes to
``s^j(1)``. The map is the least cooperative extension of these
assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, islice
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from coopnet.constructions.extension import (
    MonotoneExtensionRule,
    PartialFunction,
    RuledDomain,
    monotone_extension,
)
from coopnet.errors import ConstructionError
from coopnet.log import get_logger
from coopnet.netcore import ConstructionSource, RuleNetwork, State, TransitionRule
from coopnet.utils import as_fraction, bits_from_indices, ceil_fraction, mask


logger = get_logger("constructions.decoherence")

GAMMA_GRID = tuple(Fraction(k, 100) for k in range(1, 1001))


class DecoherenceFamilyParams(BaseModel):
    """Structural parameters of the nested-cycle construction."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=4, description="Dimension N")
    z: int = Field(ge=1, description="Half-width of the control block")
    w: int = Field(ge=0, description="Lower end of the weight window")
    u: int = Field(ge=2, description="Upper end of the weight window")
    length: int = Field(ge=1, description="Cycle length L")
    alpha: float = Field(gt=0, lt=1, description="Target decoherence fraction")

    @model_validator(mode="after")
    def _check_window(self) -> DecoherenceFamilyParams:
        if self.u <= self.w or (self.u - self.w) % 2:
            msg = f"u - w must be positive and even, got u={self.u}, w={self.w}"
            raise ValueError(msg)
        if self.u > self.n:
            msg = f"u={self.u} exceeds the dimension {self.n}"
            raise ValueError(msg)
        return self

    @property
    def window(self) -> int:
        """``J = u - w``."""
        return self.u - self.w

    @property
    def free_size(self) -> int:
        """``|R| = N - 2(z + J)``."""
        return self.n - 2 * (self.z + self.window)

    @property
    def code_weight(self) -> int:
        """``h = ceil(N/2) - (z + J)``."""
        return -(-self.n // 2) - (self.z + self.window)

    def feasibility(self) -> dict[str, bool]:
        """Each feasibility condition, evaluated with exact integers."""
        free, h, j = self.free_size, self.code_weight, self.window
        alpha = as_fraction(self.alpha)
        room = free >= 0 and 0 <= h <= free
        return {
            "layout": room,
            "code-room": room and self.length <= math.comb(free, h),
            "subset-room": math.comb(j, j // 2) > j,
            "free-fraction": free * alpha.denominator > alpha.numerator * self.n,
            "phase-coverage": self.length >= j - 1,
        }

    def check_feasibility(self) -> None:
        failed = [name for name, ok in self.feasibility().items() if not ok]
        if failed:
            msg = f"Infeasible decoherence family parameters ({', '.join(failed)}): {self!r}"
            raise ConstructionError(msg, condition=failed[0])

    @classmethod
    def from_targets(
        cls,
        alpha: float | Fraction,
        p: float | Fraction,
        c: float | Fraction,
        n: int,
    ) -> DecoherenceFamilyParams:
        """Derive ``z``, the weight window and ``L`` for target ``alpha``, ``p`` and ``c``.

        ``z`` is the smallest positive integer with ``p < 1 - 2^(2-z)``. The window
        is ``w = ceil(N/2 - g*sqrt(N))``, ``u = ceil(N/2 + g*sqrt(N))`` (``u`` bumped
        to make ``u - w`` even) for the smallest ``g`` on a grid of hundredths whose
        exact binomial mass strictly inside the window exceeds ``p + 2^(2-z)``.
        ``L = floor(c^N) + 1``.
        """
        p_q, c_q = as_fraction(p), as_fraction(c)
        if not 0 < p_q < 1:
            msg = f"p must lie in (0, 1), got {p}"
            raise ConstructionError(msg, condition="targets")
        z = 1
        while not p_q < 1 - Fraction(2) ** (2 - z):
            z += 1
        target = p_q + Fraction(2) ** (2 - z)
        root = math.sqrt(n)
        for gamma in GAMMA_GRID:
            w = math.ceil(n / 2 - float(gamma) * root)
            u = math.ceil(n / 2 + float(gamma) * root)
            if (u - w) % 2:
                u += 1
            if w < 0 or u > n:
                break
            mass = Fraction(sum(math.comb(n, k) for k in range(w + 1, u)), 1 << n)
            if mass > target:
                params = cls(
                    n=n, z=z, w=w, u=u, length=math.floor(c_q**n) + 1, alpha=float(alpha)
                )
                logger.debug("Derived decoherence parameters gamma=%s: %r", gamma, params)
                params.check_feasibility()
                return params
        msg = f"No weight window of width within the grid reaches mass {float(target):.4f} at N={n}"
        raise ConstructionError(msg, condition="weight-window")


@dataclass(frozen=True)
class DecoherenceLayout:
    """Coordinate blocks and the cycle states ``s^j(i)`` of one parameter set."""

    params: DecoherenceFamilyParams

    @cached_property
    def zero_block(self) -> int:
        return mask(self.params.z)

    @cached_property
    def one_block(self) -> int:
        return mask(self.params.z) << self.params.z

    @cached_property
    def _u_coords(self) -> range:
        start = 2 * self.params.z
        return range(start, start + self.params.window)

    @cached_property
    def _w_coords(self) -> range:
        start = 2 * self.params.z + self.params.window
        return range(start, start + self.params.window)

    @cached_property
    def free_block(self) -> int:
        start = 2 * (self.params.z + self.params.window)
        return mask(self.params.n) ^ mask(start)

    @cached_property
    def a_sets(self) -> tuple[int, ...]:
        size = self.params.window // 2
        picks = islice(combinations(self._u_coords, size), self.params.window + 1)
        return tuple(bits_from_indices(pick) for pick in picks)

    @cached_property
    def c_sets(self) -> tuple[int, ...]:
        """``c_1 .. c_L`` at positions ``0 .. L-1`` (only phases past ``J`` use them)."""
        start = 2 * (self.params.z + self.params.window)
        coords = range(start, self.params.n)
        picks = islice(combinations(coords, self.params.code_weight), self.params.length)
        return tuple(bits_from_indices(pick) for pick in picks)

    def w_set(self, j: int) -> int:
        return bits_from_indices(self._w_coords[:j])

    def state(self, j: int, i: int) -> int:
        """Packed ``s^j(i)`` for ``j`` in ``1..J`` and ``i`` in ``1..L``."""
        window = self.params.window
        base = self.w_set(j) | self.one_block
        if i < j:
            return self.a_sets[i] | base | self.free_block
        if i <= window:
            return self.a_sets[i] | base
        return self.a_sets[0] | self.c_sets[i - 1] | base

    @cached_property
    def states(self) -> np.ndarray:
        """Array of shape ``(J, L)``: row ``j - 1``, column ``i - 1``."""
        rows = [
            [self.state(j, i) for i in range(1, self.params.length + 1)]
            for j in range(1, self.params.window + 1)
        ]
        return np.asarray(rows, dtype=np.uint64)

    def attractor(self, j: int) -> list[State]:
        return [State(int(bits), self.params.n) for bits in self.states[j - 1]]

    def targets(self) -> tuple[int, ...]:
        """``s^j(1)`` for ``j = 1..J``."""
        return tuple(int(v) for v in self.states[:, 0])


@dataclass(frozen=True)
class ZDomain(RuledDomain):
    """States with a one in the zero block, a zero in the one block and weight in ``w+1 .. u``."""

    n: int
    zero_block: int
    one_block: int
    w: int
    u: int
    targets: tuple[int, ...]

    def contains(self, bits: int) -> bool:
        return (
            bits & self.zero_block != 0
            and bits & self.one_block != self.one_block
            and self.w < bits.bit_count() <= self.u
        )

    def image(self, bits: int) -> int:
        return self.targets[bits.bit_count() - self.w - 1]

    def dominated_join(self, x: int) -> int:
        """Image of the heaviest member below ``x``; images grow with weight."""
        if x & self.zero_block == 0:
            return 0
        heaviest = x.bit_count() - (x & self.one_block == self.one_block)
        heaviest = min(heaviest, self.u)
        if heaviest <= self.w:
            return 0
        return self.targets[heaviest - self.w - 1]

    def dominated_join_many(self, states: np.ndarray) -> np.ndarray:
        states = np.asarray(states, dtype=np.uint64)
        one_block = np.uint64(self.one_block)
        weight = np.bitwise_count(states).astype(np.int64)
        heaviest = weight - ((states & one_block) == one_block)
        heaviest = np.minimum(heaviest, self.u)
        valid = ((states & np.uint64(self.zero_block)) != 0) & (heaviest > self.w)
        index = np.clip(heaviest - self.w - 1, 0, len(self.targets) - 1)
        targets = np.asarray(self.targets, dtype=np.uint64)
        return np.where(valid, targets[index], np.uint64(0))


def verify_conditions(layout: DecoherenceLayout) -> None:
    """Check nesting, control pattern, phase separation and cross-phase incomparability.

    Raises:
        ConstructionError: naming the failed condition, with a witness.
    """
    params = layout.params
    states = layout.states
    big_j, length, n = params.window, params.length, params.n
    alpha = as_fraction(params.alpha)

    for j in range(1, big_j):
        for i in range(1, length + 1):
            low, high = int(states[j - 1, i - 1]), int(states[j, i - 1])
            if low & ~high or low == high:
                msg = f"s^{j}({i}) is not strictly below s^{j + 1}({i})"
                raise ConstructionError(msg, condition="nesting", witness=(j, i))

    for (row, col), bits in np.ndenumerate(states):
        value = int(bits)
        if value & layout.zero_block or value & layout.one_block != layout.one_block:
            msg = f"s^{row + 1}({col + 1}) breaks the control-block pattern"
            raise ConstructionError(msg, condition="control-pattern", witness=(row + 1, col + 1))

    for j in range(1, big_j):
        if j > length:
            msg = f"Phase {j} does not exist on cycles of length {length}"
            raise ConstructionError(msg, condition="phase-separation", witness=(j,))
        distance = (int(states[j - 1, j - 1]) ^ int(states[j, j - 1])).bit_count()
        if distance * alpha.denominator < alpha.numerator * n:
            msg = f"H(s^{j}({j}), s^{j + 1}({j})) = {distance} < alpha*N"
            raise ConstructionError(msg, condition="phase-separation", witness=(j, distance))

    flat = states.T.reshape(-1)
    phase = np.repeat(np.arange(length), big_j)
    below = (flat[:, None] & ~flat[None, :]) == 0
    cross = phase[:, None] != phase[None, :]
    bad = np.argwhere(below & cross)
    if len(bad):
        a, b = (int(v) for v in bad[0])
        witness = (
            (a % big_j + 1, int(phase[a]) + 1),
            (b % big_j + 1, int(phase[b]) + 1),
        )
        msg = f"Cycle states from different phases are comparable: {witness}"
        raise ConstructionError(msg, condition="cross-phase-incomparability", witness=witness)


@dataclass(frozen=True)
class DecoherenceFamilyRule(TransitionRule):
    params: DecoherenceFamilyParams

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.params.n

    @cached_property
    def layout(self) -> DecoherenceLayout:
        return DecoherenceLayout(self.params)

    @cached_property
    def z_domain(self) -> ZDomain:
        p = self.params
        layout = self.layout
        return ZDomain(p.n, layout.zero_block, layout.one_block, p.w, p.u, layout.targets())

    @cached_property
    def extension(self) -> MonotoneExtensionRule:
        states = self.layout.states
        length = self.params.length
        pairs = [
            (int(row[i]), int(row[(i + 1) % length])) for row in states for i in range(length)
        ]
        return monotone_extension(PartialFunction(self.n, tuple(pairs), self.z_domain))

    def in_z(self, bits: int) -> bool:
        return self.z_domain.contains(bits)

    def z_index(self, bits: int) -> int | None:
        """``j`` with ``|s| = w + j`` for members of ``Z``."""
        return bits.bit_count() - self.params.w if self.in_z(bits) else None

    def apply(self, bits: int) -> int:
        return self.extension.apply(bits)

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        return self.extension.apply_many(states)


def build_decoherence_family_network(params: DecoherenceFamilyParams) -> RuleNetwork:
    """Build and verify the nested-cycle network for ``params``."""
    params.check_feasibility()
    rule = DecoherenceFamilyRule(params)
    verify_conditions(rule.layout)
    rule.extension  # noqa: B018
    logger.debug(
        "Decoherence family n=%d: %d cycles of length %d, |R|=%d",
        params.n,
        params.window,
        params.length,
        params.free_size,
    )
    source = ConstructionSource("decofam", params.model_dump(mode="json"))
    return RuleNetwork(params.n, rule, source)


def z_threshold(params: DecoherenceFamilyParams) -> int:
    """``ceil(alpha * N)``."""
    return ceil_fraction(as_fraction(params.alpha) * params.n)
