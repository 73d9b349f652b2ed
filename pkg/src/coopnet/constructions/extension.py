"""Monotone (cooperative) extension of partial Boolean maps.

The least extension sends ``x`` to the coordinatewise OR of ``f(a)`` over all
domain points ``a <= x`` (all zeros when there are none); the greatest sends
``x`` to the AND of ``f(a)`` over ``a >= x`` (all ones when there are none).
Both agree with ``f`` on its domain exactly when ``f`` is order-preserving.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from coopnet.errors import ConstructionError, DimensionCapError
from coopnet.log import get_logger
from coopnet.netcore import State, TransitionRule
from coopnet.utils import mask


if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator


logger = get_logger("constructions.extension")

RULED_SCAN_CAP = 16
"""Largest dimension for which a ruled domain may be scanned state by state."""

MEMO_LIMIT = 1 << 16


def _submasks(x: int) -> Iterator[int]:
    sub = x
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & x


class RuledDomain(ABC):
    """Domain part given by a membership predicate and an image rule."""

    n: int

    @abstractmethod
    def contains(self, bits: int) -> bool: ...

    @abstractmethod
    def image(self, bits: int) -> int: ...

    def dominated_join(self, x: int) -> int:
        """OR of ``image(a)`` over members ``a <= x``.

        The fallback enumerates every ``a <= x``; subclasses with structure
        override it with a closed form.
        """
        if self.n > RULED_SCAN_CAP:
            msg = f"Scanning a ruled domain of dimension {self.n} (cap {RULED_SCAN_CAP})"
            raise DimensionCapError(msg)
        out = 0
        for a in _submasks(x):
            if self.contains(a):
                out |= self.image(a)
        return out

    def dominating_meet(self, x: int) -> int:
        """AND of ``image(a)`` over members ``a >= x``."""
        if self.n > RULED_SCAN_CAP:
            msg = f"Scanning a ruled domain of dimension {self.n} (cap {RULED_SCAN_CAP})"
            raise DimensionCapError(msg)
        full = mask(self.n)
        out = full
        for free in _submasks(full ^ x):
            if self.contains(x | free):
                out &= self.image(x | free)
        return out

    def dominated_join_many(self, states: np.ndarray) -> np.ndarray:
        values = (self.dominated_join(int(x)) for x in states)
        return np.fromiter(values, dtype=np.uint64, count=len(states))

    def dominating_meet_many(self, states: np.ndarray) -> np.ndarray:
        values = (self.dominating_meet(int(x)) for x in states)
        return np.fromiter(values, dtype=np.uint64, count=len(states))


@dataclass(frozen=True)
class PartialFunction:
    """A Boolean map defined on finitely many listed states plus an optional ruled part."""

    n: int
    explicit: tuple[tuple[int, int], ...] = ()
    """``(state, image)`` pairs, packed."""
    ruled: RuledDomain | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "explicit", tuple((int(a), int(b)) for a, b in self.explicit))
        limit = mask(self.n)
        seen: set[int] = set()
        for a, b in self.explicit:
            if not (0 <= a <= limit and 0 <= b <= limit):
                msg = f"Pair ({a}, {b}) is not a pair of states of dimension {self.n}"
                raise ValueError(msg)
            if a in seen:
                msg = f"Domain state {State(a, self.n)} listed twice"
                raise ValueError(msg)
            seen.add(a)
        if self.ruled is not None and self.ruled.n != self.n:
            msg = f"Ruled domain of dimension {self.ruled.n} in a map of dimension {self.n}"
            raise ValueError(msg)

    @classmethod
    def from_states(cls, pairs: Iterable[tuple[State, State]], n: int) -> PartialFunction:
        return cls(n, tuple((a.bits, b.bits) for a, b in pairs))

    @cached_property
    def domain(self) -> np.ndarray:
        return np.asarray([a for a, _ in self.explicit], dtype=np.uint64)

    @cached_property
    def images(self) -> np.ndarray:
        return np.asarray([b for _, b in self.explicit], dtype=np.uint64)

    def __len__(self) -> int:
        return len(self.explicit)

    def order_violation(self) -> tuple[State, State] | None:
        """A pair ``a <= b`` of listed states with ``f(a) not <= f(b)``, if any."""
        if len(self.explicit) < 2:  # noqa: PLR2004
            return None
        dom, img = self.domain, self.images
        below = (dom[:, None] & ~dom[None, :]) == 0
        image_below = (img[:, None] & ~img[None, :]) == 0
        bad = np.argwhere(below & ~image_below)
        if len(bad) == 0:
            return None
        i, j = (int(v) for v in bad[0])
        return State(self.explicit[i][0], self.n), State(self.explicit[j][0], self.n)

    def check_order_consistency(self) -> None:
        if (pair := self.order_violation()) is not None:
            a, b = pair
            msg = f"Partial map is not order-preserving: {a} <= {b} but their images are not"
            raise ConstructionError(msg, condition="order-consistency", witness=pair)


@dataclass(frozen=True)
class MonotoneExtensionRule(TransitionRule):
    """Least cooperative extension of a partial map."""

    pf: PartialFunction
    _memo: dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.pf.n

    def apply(self, bits: int) -> int:
        if (cached := self._memo.get(bits)) is not None:
            return cached
        out = 0
        for a, b in self.pf.explicit:
            if a & ~bits == 0:
                out |= b
        if self.pf.ruled is not None:
            out |= self.pf.ruled.dominated_join(bits)
        if len(self._memo) < MEMO_LIMIT:
            self._memo[bits] = out
        return out

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        states = np.asarray(states, dtype=np.uint64)
        out = np.zeros_like(states)
        full = mask(self.n)
        for a, b in self.pf.explicit:
            out |= np.where(states & np.uint64(full ^ a) == 0, np.uint64(b), np.uint64(0))
        if self.pf.ruled is not None:
            out |= self.pf.ruled.dominated_join_many(states)
        return out


@dataclass(frozen=True)
class GreatestExtensionRule(TransitionRule):
    """Greatest cooperative extension (dual meet), an upper bound for every other one."""

    pf: PartialFunction

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.pf.n

    def apply(self, bits: int) -> int:
        out = mask(self.n)
        for a, b in self.pf.explicit:
            if bits & ~a == 0:
                out &= b
        if self.pf.ruled is not None:
            out &= self.pf.ruled.dominating_meet(bits)
        return out

    def apply_many(self, states: np.ndarray) -> np.ndarray:
        states = np.asarray(states, dtype=np.uint64)
        full = np.uint64(mask(self.n))
        out = np.full_like(states, full)
        for a, b in self.pf.explicit:
            out &= np.where(states & ~np.uint64(a) & full == 0, np.uint64(b), full)
        if self.pf.ruled is not None:
            out &= self.pf.ruled.dominating_meet_many(states)
        return out


def monotone_extension(pf: PartialFunction, *, check: bool = True) -> MonotoneExtensionRule:
    """Least cooperative total extension of ``pf``.

    Raises:
        ConstructionError: the listed part of ``pf`` is not order-preserving,
            with the offending pair as witness.
    """
    if check:
        pf.check_order_consistency()
    logger.debug("Extending partial map on %d listed states (n=%d)", len(pf), pf.n)
    return MonotoneExtensionRule(pf)


def greatest_extension(pf: PartialFunction, *, check: bool = True) -> GreatestExtensionRule:
    if check:
        pf.check_order_consistency()
    return GreatestExtensionRule(pf)


def random_incomparable_domain(n: int, size: int, rng: np.random.Generator) -> list[int]:
    """Up to ``size`` distinct states of one random weight, hence pairwise incomparable."""
    weight = int(rng.integers(1, n)) if n > 1 else 0
    found: dict[int, None] = {}
    for _ in range(size * 8):
        if len(found) == size:
            break
        coords = rng.choice(n, size=weight, replace=False)
        found[int(sum(1 << int(c) for c in coords))] = None
    return list(found)

