"""Seeded initial-state and flip-pair samplers.

Every sample ``i`` of a run with seed ``seed`` draws from its own PCG64
generator ``numpy.random.default_rng([seed, i])``, so results do not depend
on how samples are spread across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Protocol

import numpy as np

from coopnet.coding.robust import RobustScheme, encode_word
from coopnet.errors import DomainError
from coopnet.utils import random_bits


if TYPE_CHECKING:
    from collections.abc import Callable


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


class StateSampler(Protocol):
    def __call__(self, rng: np.random.Generator) -> int: ...


class PairSampler(Protocol):
    def __call__(self, rng: np.random.Generator) -> tuple[int, int, int]:
        """Return ``(s, flipped_bit, s_star)``."""
        ...


class FlipDirection(StrEnum):
    """Which way the flipped coordinate moves from ``s`` to ``s*``."""

    TOGGLE = "toggle"
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class UniformStates:
    n: int

    def __call__(self, rng: np.random.Generator) -> int:
        return random_bits(rng, self.n)


@dataclass(frozen=True)
class FlipPairs:
    """Uniform state plus a uniformly chosen bit flip.

    With ``direction=UP`` the chosen bit is cleared in ``s`` and set in ``s*``
    (``DOWN`` the reverse). ``accept`` conditions the draw by rejection: both
    states must satisfy it.
    """

    n: int
    direction: FlipDirection = FlipDirection.TOGGLE
    accept: Callable[[int], bool] | None = None
    max_tries: int = 100_000

    def __call__(self, rng: np.random.Generator) -> tuple[int, int, int]:
        for _ in range(self.max_tries):
            s = random_bits(rng, self.n)
            bit = int(rng.integers(self.n))
            match self.direction:
                case FlipDirection.UP:
                    s &= ~(1 << bit)
                case FlipDirection.DOWN:
                    s |= 1 << bit
            s_star = s ^ (1 << bit)
            if self.accept is None or (self.accept(s) and self.accept(s_star)):
                return s, bit, s_star
        msg = f"No acceptable flip pair found in {self.max_tries} draws"
        raise DomainError(msg)


@dataclass(frozen=True)
class CodingStates:
    """Coding state of a counter tape with a uniform digit below each block's modulus."""

    moduli: tuple[int, ...]
    k: int
    ell: int

    def __call__(self, rng: np.random.Generator) -> int:
        scheme = RobustScheme(self.k, self.ell)
        out = 0
        for b, modulus in enumerate(self.moduli):
            digit = int(rng.integers(modulus))
            out |= encode_word(digit, scheme).bits << (b * scheme.m)
        return out
