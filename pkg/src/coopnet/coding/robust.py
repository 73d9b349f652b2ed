"""Robust constant-weight coding of integers into Boolean words.

A robust code of even width ``k`` is a vector whose coordinate pairs
``(2j, 2j + 1)`` are each one of ``00``, ``01``, ``11`` and whose weight is
exactly ``k / 2``. Codes are ordered lexicographically by their string form
(coordinate 0 first). A word of width ``m = k * ell`` is ``ell`` consecutive
blocks; block ``b`` holds base-``|C_k|`` digit ``b`` of the encoded integer,
least significant digit in block 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from itertools import product
from typing import TYPE_CHECKING

from coopnet.errors import DimensionMismatchError, DomainError
from coopnet.log import get_logger
from coopnet.netcore.state import State
from coopnet.utils import mask


if TYPE_CHECKING:
    from coopnet.coding.friendliness import FriendlinessParams


logger = get_logger("coding.robust")

PAIR_PATTERNS = ((0, 0), (0, 1), (1, 1))
ENUMERATION_CAP = 32


def _check_width(k: int) -> None:
    if k < 2 or k % 2:  # noqa: PLR2004
        msg = f"Code width k must be even and at least 2, got {k}"
        raise DomainError(msg)


@cache
def robust_codes_count(k: int) -> int:
    """Exact ``|C_k|``: ways to pick per-pair weights in {0, 1, 2} summing to ``k / 2``."""
    _check_width(k)
    half = k // 2
    ways = [1] + [0] * half
    for _ in range(half):
        ways = [
            sum(ways[total - w] for w in (0, 1, 2) if total - w >= 0) for total in range(half + 1)
        ]
    return ways[half]


@cache
def enumerate_robust_codes(k: int) -> tuple[State, ...]:
    """All robust codes of width ``k`` in lexicographic string order."""
    _check_width(k)
    if k > ENUMERATION_CAP:
        msg = f"Refusing to enumerate codes of width {k} (cap {ENUMERATION_CAP})"
        raise DomainError(msg)
    codes = []
    for pairs in product(PAIR_PATTERNS, repeat=k // 2):
        if sum(a + b for a, b in pairs) != k // 2:
            continue
        bits = 0
        for j, (low, high) in enumerate(pairs):
            bits |= low << (2 * j) | high << (2 * j + 1)
        codes.append(State(bits, k))
    return tuple(sorted(codes, key=State.to_string))


@dataclass(frozen=True)
class RobustScheme:
    """Words of ``ell`` robust blocks of width ``k``."""

    k: int
    ell: int

    def __post_init__(self) -> None:
        _check_width(self.k)
        if self.ell < 1:
            msg = f"A word needs at least one block, got ell={self.ell}"
            raise DomainError(msg)

    @property
    def m(self) -> int:
        """Word width."""
        return self.k * self.ell

    @property
    def block_capacity(self) -> int:
        return robust_codes_count(self.k)

    @property
    def capacity(self) -> int:
        """Number of encodable integers, ``|C_k| ** ell``."""
        return self.block_capacity**self.ell

    @property
    def codes(self) -> tuple[State, ...]:
        return enumerate_robust_codes(self.k)

    @cached_property
    def code_index(self) -> dict[int, int]:
        return {code.bits: i for i, code in enumerate(self.codes)}

    def blocks(self, bits: int) -> list[int]:
        """Packed blocks of a word, block 0 first."""
        block_mask = mask(self.k)
        return [bits >> (b * self.k) & block_mask for b in range(self.ell)]

    @classmethod
    def for_capacity(cls, n_values: int, params: FriendlinessParams) -> RobustScheme:
        """Scheme coding ``n_values`` integers with word width near ``(1 + eps) log2 n``.

        The width is rounded up to a multiple of ``k`` and grown further until
        the capacity covers ``n_values``.
        """
        if n_values < 1:
            msg = f"Need at least one value to code, got {n_values}"
            raise DomainError(msg)
        ratio = 1 + params.epsilon
        width = 0
        # smallest width with 2^width >= n^(1 + eps)
        while Fraction(2) ** (width * ratio.denominator) < Fraction(n_values) ** ratio.numerator:
            width += 1
        ell = max(1, -(-width // params.k))
        scheme = cls(params.k, ell)
        while scheme.capacity < n_values:
            scheme = cls(params.k, scheme.ell + 1)
        if scheme.m != width:
            logger.debug(
                "Word width for n=%d rounded from %d to %d (k=%d)",
                n_values,
                width,
                scheme.m,
                scheme.k,
            )
        return scheme


def encode_word(v: int, scheme: RobustScheme) -> State:
    """Code word of ``v``: base-``|C_k|`` digits, one robust block each."""
    if not 0 <= v < scheme.capacity:
        msg = f"Value {v} outside the code range [0, {scheme.capacity})"
        raise DomainError(msg)
    base = scheme.block_capacity
    codes = scheme.codes
    bits = 0
    for b in range(scheme.ell):
        v, digit = divmod(v, base)
        bits |= codes[digit].bits << (b * scheme.k)
    return State(bits, scheme.m)


def decode_word(s: State, scheme: RobustScheme) -> int | None:
    """Inverse of :func:`encode_word`; ``None`` if some block is not a code."""
    _check_word(s, scheme)
    value = 0
    for block in reversed(scheme.blocks(s.bits)):
        digit = scheme.code_index.get(block)
        if digit is None:
            return None
        value = value * scheme.block_capacity + digit
    return value


def is_crude(s: State, scheme: RobustScheme) -> bool:
    """Whether some block is all zeros and some block is all ones."""
    _check_word(s, scheme)
    blocks = scheme.blocks(s.bits)
    return 0 in blocks and mask(scheme.k) in blocks


def _check_word(s: State, scheme: RobustScheme) -> None:
    if s.n != scheme.m:
        msg = f"Word of width {s.n} given for scheme of width {scheme.m}"
        raise DimensionMismatchError(msg)


def codebook_text(scheme: RobustScheme) -> str:
    """Plain-text codebook: parameters, then one code per line."""
    lines = [
        f"k = {scheme.k}",
        f"ell = {scheme.ell}",
        f"m = {scheme.m}",
        f"codes = {scheme.block_capacity}",
        f"capacity = {scheme.capacity}",
        "",
    ]
    lines.extend(f"{i}\t{code.to_string()}" for i, code in enumerate(scheme.codes))
    return "\n".join(lines) + "\n"
