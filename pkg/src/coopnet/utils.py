"""Bit-level helpers for packed states."""

from __future__ import annotations

from fractions import Fraction
import math
from typing import TYPE_CHECKING

import numpy as np


if TYPE_CHECKING:
    from collections.abc import Iterable


def mask(n: int) -> int:
    """All-ones word of width ``n``."""
    return (1 << n) - 1


def popcount(bits: int) -> int:
    return bits.bit_count()


def bits_from_indices(indices: Iterable[int]) -> int:
    """Pack zero-based coordinate indices into an integer."""
    bits = 0
    for index in indices:
        bits |= 1 << index
    return bits


def indices_from_bits(bits: int) -> list[int]:
    """Zero-based coordinates set in ``bits``, ascending."""
    indices = []
    while bits:
        low = bits & -bits
        indices.append(low.bit_length() - 1)
        bits ^= low
    return indices


def random_bits(rng: np.random.Generator, n: int) -> int:
    """Draw a uniform ``n``-bit word from ``rng`` (any width)."""
    if n == 0:
        return 0
    raw = rng.bytes((n + 7) // 8)
    return int.from_bytes(raw, "little") & mask(n)


def state_dtype(n: int) -> type[np.unsignedinteger]:
    """Smallest unsigned numpy dtype holding ``n``-bit states."""
    if n <= 8:  # noqa: PLR2004
        return np.uint8
    if n <= 16:  # noqa: PLR2004
        return np.uint16
    if n <= 32:  # noqa: PLR2004
        return np.uint32
    return np.uint64


def as_fraction(value: float | str | Fraction) -> Fraction:
    """Exact rational for a user-supplied number.

    Floats go through their shortest decimal repr, so ``1.9`` becomes ``19/10``.
    """
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


def ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def floor_power(base: Fraction, exponent: int) -> int:
    """Exact ``floor(base ** exponent)``."""
    return math.floor(base**exponent)
