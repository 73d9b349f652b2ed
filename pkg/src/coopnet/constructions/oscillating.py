"""Oscillating networks: two complementary cycles and a parity funnel.

States are read as subsets ``B`` of ``{0, ..., N-1}``. A family ``A_0, ...,
A_{L-1}`` of distinct subsets of ``{0, ..., N-2}`` defines the map

- ``A_l -> A_{l+1}`` and ``[N] - A_l -> [N] - A_{l+1}`` (indices mod ``L``),
- every other ``B`` goes to ``A_0`` if ``|B|`` is odd and to ``[N] - A_0``
  otherwise.

A single bit flip changes the parity, so almost every flipped pair lands on
the two complementary cycles and stays at Hamming distance ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from coopnet.errors import ConstructionError
from coopnet.log import get_logger
from coopnet.netcore import ConstructionSource, RuleNetwork, TransitionRule
from coopnet.utils import as_fraction, bits_from_indices, mask


logger = get_logger("constructions.oscillating")

RANDOM_FAMILY_CAP = 62
"""Largest ``N - 1`` for which a random family is drawn from an integer range."""


class OscillatingParams(BaseModel):
    """Dimension, cycle length and the cycle family (random when omitted)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=2, description="Dimension N")
    length: int = Field(ge=1, description="Cycle length L")
    family: tuple[tuple[int, ...], ...] | None = Field(
        default=None,
        description="Zero-based subsets A_l of {0..N-2}; drawn from the seed when omitted",
    )
    seed: int | None = Field(default=None, description="Seed for the random family")

    @model_validator(mode="after")
    def _check_family(self) -> OscillatingParams:
        if self.family is None:
            if self.seed is None:
                msg = "A random family needs a seed; pass seed or an explicit family"
                raise ValueError(msg)
            if self.length > 1 << (self.n - 1):
                msg = f"Only 2^{self.n - 1} subsets of [N-1] exist, cannot pick L={self.length}"
                raise ValueError(msg)
            return self
        if len(self.family) != self.length:
            msg = f"Family has {len(self.family)} sets but L={self.length}"
            raise ValueError(msg)
        for subset in self.family:
            if any(not 0 <= x < self.n - 1 for x in subset):
                msg = f"Set {sorted(subset)} is not a subset of {{0..{self.n - 2}}}"
                raise ValueError(msg)
        if len({frozenset(s) for s in self.family}) != self.length:
            msg = "Family sets must be pairwise distinct"
            raise ValueError(msg)
        return self

    @classmethod
    def for_chaos(
        cls,
        n: int,
        c: float | Fraction,
        p: float | Fraction,
        seed: int | None = None,
    ) -> OscillatingParams:
        """Random family with ``L = floor(c^N) + 1``, checked against the attractor-size bound.

        The bound ``c^N + 1 < (1 - p) / (N - 1) * 2^(N - 2)`` keeps the cycles
        and their exceptional neighbours a small share of the state space.
        """
        c_q, p_q = as_fraction(c), as_fraction(p)
        power = c_q**n
        bound = (1 - p_q) / (n - 1) * Fraction(2) ** (n - 2)
        if not power + 1 < bound:
            msg = (
                f"c^N + 1 = {float(power + 1):.6g} is not below "
                f"(1-p)/(N-1)*2^(N-2) = {float(bound):.6g}"
            )
            raise ConstructionError(msg, condition="attractor-size")
        return cls(n=n, length=math.floor(power) + 1, seed=seed)

    def resolved_family(self) -> tuple[int, ...]:
        """Packed sets ``A_0 .. A_{L-1}``."""
        if self.family is not None:
            return tuple(bits_from_indices(s) for s in self.family)
        rng = np.random.default_rng(self.seed)
        universe = 1 << (self.n - 1)
        if self.n - 1 <= RANDOM_FAMILY_CAP:
            picks = rng.choice(universe, size=self.length, replace=False)
            return tuple(int(v) for v in picks)
        found: dict[int, None] = {}
        while len(found) < self.length:
            found[int.from_bytes(rng.bytes((self.n + 6) // 8), "little") & (universe - 1)] = None
        return tuple(found)


@dataclass(frozen=True)
class OscillatingRule(TransitionRule):
    n: int
    family: tuple[int, ...]

    @cached_property
    def _complements(self) -> tuple[int, ...]:
        full = mask(self.n)
        return tuple(full ^ a for a in self.family)

    @cached_property
    def _next(self) -> dict[int, int]:
        """Successors on both cycles."""
        size = len(self.family)
        table = {}
        for i in range(size):
            table[self.family[i]] = self.family[(i + 1) % size]
            table[self._complements[i]] = self._complements[(i + 1) % size]
        return table

    @cached_property
    def _keys(self) -> tuple[np.ndarray, np.ndarray]:
        keys = sorted(self._next)
        return (
            np.asarray(keys, dtype=np.uint64),
            np.asarray([self._next[k] for k in keys], dtype=np.uint64),
        )

    def apply(self, bits: int) -> int:
        if (target := self._next.get(bits)) is not None:
            return target
        return self.family[0] if bits.bit_count() % 2 else self._complements[0]

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        states = np.asarray(states, dtype=np.uint64)
        odd = np.bitwise_count(states) % 2 == 1
        out = np.where(odd, np.uint64(self.family[0]), np.uint64(self._complements[0]))
        keys, values = self._keys
        pos = np.minimum(np.searchsorted(keys, states), len(keys) - 1)
        hit = keys[pos] == states
        out[hit] = values[pos[hit]]
        return out

    def cycle(self, complement: bool = False) -> tuple[int, ...]:
        return self._complements if complement else self.family


def build_oscillating_network(params: OscillatingParams) -> RuleNetwork:
    family = params.resolved_family()
    logger.debug("Oscillating network n=%d with L=%d", params.n, params.length)
    source = ConstructionSource("oscillating", params.model_dump(mode="json"), params.seed)
    return RuleNetwork(params.n, OscillatingRule(params.n, family), source)
