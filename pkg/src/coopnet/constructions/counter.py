"""Counter tapes: one robust-coded modular counter per block."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from coopnet.coding.robust import RobustScheme, encode_word
from coopnet.constructions.extension import (
    MonotoneExtensionRule,
    PartialFunction,
    monotone_extension,
)
from coopnet.errors import ConstructionError
from coopnet.log import get_logger
from coopnet.netcore import ConstructionSource, RuleNetwork, TransitionRule
from coopnet.netcore.network import LOOKUP_CAP, state_range
from coopnet.utils import mask


logger = get_logger("constructions.counter")


class CounterParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    moduli: tuple[int, ...] = Field(min_length=1, description="Modulus of each counter block")
    k: int = Field(ge=2, description="Robust code width")
    ell: int = Field(ge=1, description="Code blocks per counter word")

    @property
    def scheme(self) -> RobustScheme:
        return RobustScheme(self.k, self.ell)


def _block_rule(modulus: int, scheme: RobustScheme) -> MonotoneExtensionRule:
    pairs = tuple(
        (encode_word(v, scheme).bits, encode_word((v + 1) % modulus, scheme).bits)
        for v in range(modulus)
    )
    return monotone_extension(PartialFunction(scheme.m, pairs))


@dataclass(frozen=True)
class CounterTapeRule(TransitionRule):
    """Blocks of width ``m``; block ``b`` counts modulo ``moduli[b]``."""

    moduli: tuple[int, ...]
    scheme: RobustScheme

    def __post_init__(self) -> None:
        for b, modulus in enumerate(self.moduli):
            if not 1 <= modulus <= self.scheme.capacity:
                msg = (
                    f"Modulus {modulus} of block {b} exceeds the code capacity "
                    f"{self.scheme.capacity} of k={self.scheme.k}, ell={self.scheme.ell}"
                )
                raise ConstructionError(msg, condition="code-capacity", witness=(b, modulus))

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.scheme.m * len(self.moduli)

    @property
    def period(self) -> int:
        """Cycle length from any coding state."""
        return math.lcm(*self.moduli)

    @cached_property
    def block_rules(self) -> tuple[MonotoneExtensionRule, ...]:
        return tuple(_block_rule(modulus, self.scheme) for modulus in self.moduli)

    @cached_property
    def block_tables(self) -> tuple[np.ndarray, ...] | None:
        """Materialised per-block maps when a block fits the lookup cap."""
        if self.scheme.m > LOOKUP_CAP:
            return None
        every = state_range(0, 1 << self.scheme.m)
        return tuple(rule.apply_many(every) for rule in self.block_rules)

    def apply(self, bits: int) -> int:
        m = self.scheme.m
        block_mask = mask(m)
        tables = self.block_tables
        out = 0
        for b, rule in enumerate(self.block_rules):
            word = bits >> (b * m) & block_mask
            image = int(tables[b][word]) if tables is not None else rule.apply(word)
            out |= image << (b * m)
        return out

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        tables = self.block_tables
        if tables is None:
            return super().apply_many(states)
        states = np.asarray(states, dtype=np.uint64)
        m = np.uint64(self.scheme.m)
        block_mask = np.uint64(mask(self.scheme.m))
        out = np.zeros_like(states)
        for b, table in enumerate(tables):
            shift = np.uint64(b) * m
            out |= table[(states >> shift) & block_mask] << shift
        return out

    def encode(self, values: tuple[int, ...]) -> int:
        """Coding state holding ``values[b]`` in block ``b``."""
        out = 0
        for b, (value, modulus) in enumerate(zip(values, self.moduli, strict=True)):
            if not 0 <= value < modulus:
                msg = f"Digit {value} of block {b} is not below its modulus {modulus}"
                raise ValueError(msg)
            out |= encode_word(value, self.scheme).bits << (b * self.scheme.m)
        return out


def build_counter_tape_network(
    moduli: tuple[int, ...] | list[int],
    scheme: RobustScheme,
) -> RuleNetwork:
    """Counter tape for ``moduli`` coded with ``scheme``.

    Raises:
        ConstructionError: a modulus exceeds ``|C_k| ** ell``.
    """
    rule = CounterTapeRule(tuple(moduli), scheme)
    logger.debug("Counter tape n=%d, moduli=%s, period=%d", rule.n, rule.moduli, rule.period)
    params = CounterParams(moduli=rule.moduli, k=scheme.k, ell=scheme.ell)
    source = ConstructionSource("counter", params.model_dump(mode="json"))
    return RuleNetwork(rule.n, rule, source)
