"""Bit-packed Boolean states and their order/metric structure."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Self

from coopnet.errors import DimensionMismatchError
from coopnet.utils import bits_from_indices, indices_from_bits, mask


if TYPE_CHECKING:
    from collections.abc import Iterable


class Comparison(StrEnum):
    """Outcome of comparing two states coordinatewise."""

    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, slots=True)
class State:
    """An ``n``-dimensional Boolean vector packed into an integer.

    Bit ``i`` of ``bits`` (least significant first) is coordinate ``i``. The
    string form lists coordinates left to right, so ``State.from_string("0111")``
    has coordinate 0 off and coordinates 1..3 on. The subset view uses the same
    zero-based coordinates.
    """

    bits: int
    """Packed coordinates, little-endian."""

    n: int
    """Dimension."""

    def __post_init__(self) -> None:
        if self.n < 0:
            msg = f"Dimension must be non-negative, got {self.n}"
            raise ValueError(msg)
        if not 0 <= self.bits <= mask(self.n):
            msg = f"Bits {self.bits:#x} do not fit into dimension {self.n}"
            raise ValueError(msg)

    @classmethod
    def zeros(cls, n: int) -> Self:
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> Self:
        return cls(mask(n), n)

    @classmethod
    def from_string(cls, text: str) -> Self:
        """Parse a ``0``/``1`` string whose first character is coordinate 0."""
        if any(char not in "01" for char in text):
            msg = f"State strings may only contain 0 and 1, got {text!r}"
            raise ValueError(msg)
        bits = sum(1 << i for i, char in enumerate(text) if char == "1")
        return cls(bits, len(text))

    @classmethod
    def from_subset(cls, indices: Iterable[int], n: int) -> Self:
        """Characteristic vector of a set of zero-based coordinates."""
        return cls(bits_from_indices(indices), n)

    @classmethod
    def from_hex(cls, text: str, n: int) -> Self:
        return cls(int(text, 16), n)

    def to_string(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def to_hex(self) -> str:
        width = max(1, (self.n + 3) // 4)
        return f"{self.bits:0{width}x}"

    def subset(self) -> frozenset[int]:
        """Set of coordinates that are on."""
        return frozenset(indices_from_bits(self.bits))

    @property
    def weight(self) -> int:
        """Number of coordinates that are on."""
        return self.bits.bit_count()

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.n:
            msg = f"Coordinate {index} out of range for dimension {self.n}"
            raise IndexError(msg)
        return self.bits >> index & 1

    def __len__(self) -> int:
        return self.n

    def flip(self, index: int) -> State:
        """Copy with coordinate ``index`` toggled."""
        if not 0 <= index < self.n:
            msg = f"Coordinate {index} out of range for dimension {self.n}"
            raise IndexError(msg)
        return State(self.bits ^ (1 << index), self.n)

    def complement(self) -> State:
        return State(self.bits ^ mask(self.n), self.n)

    def __str__(self) -> str:
        return self.to_string()


def check_dimensions(s: State, t: State) -> None:
    if s.n != t.n:
        msg = f"Dimension mismatch: {s.n} != {t.n}"
        raise DimensionMismatchError(msg)


def hamming(s: State, t: State) -> int:
    """Number of coordinates where ``s`` and ``t`` differ."""
    check_dimensions(s, t)
    return (s.bits ^ t.bits).bit_count()


def leq(s: State, t: State) -> bool:
    """Coordinatewise order, i.e. the subset relation on supports."""
    check_dimensions(s, t)
    return s.bits & ~t.bits == 0


def comparable(s: State, t: State) -> Comparison:
    """Classify the pair as less, greater, equal or incomparable."""
    check_dimensions(s, t)
    if s.bits == t.bits:
        return Comparison.EQUAL
    if s.bits & ~t.bits == 0:
        return Comparison.LESS
    if t.bits & ~s.bits == 0:
        return Comparison.GREATER
    return Comparison.INCOMPARABLE
