"""Closed-form bounds: the binomial dimension threshold and the q(c) ceiling."""

from __future__ import annotations

from fractions import Fraction
import math

from coopnet.errors import DomainError
from coopnet.utils import as_fraction


SQRT3 = math.sqrt(3)
THRESHOLD_SEARCH_LIMIT = 1 << 20


def binomial_condition_holds(n: int, alpha: float | Fraction, p: float | Fraction) -> bool:
    """Whether ``C(n, k) / 2^n < p * alpha / 2`` for every ``k`` in ``1..n``."""
    bound = as_fraction(p) * as_fraction(alpha) / 2
    central = math.comb(n, n // 2)
    return central * bound.denominator < bound.numerator * (1 << n)


def n_alpha_p_threshold(alpha: float | Fraction, p: float | Fraction) -> int:
    """Smallest ``N >= 1`` satisfying the binomial condition, with exact integers.

    The maximum of ``C(N, k)`` over ``k`` in ``1..N`` is the central binomial
    coefficient, and its ratio to ``2^N`` never increases with ``N``, so the
    first ``N`` found is the threshold.
    """
    alpha_q, p_q = as_fraction(alpha), as_fraction(p)
    if alpha_q <= 0:
        msg = f"alpha must be positive, got {alpha}"
        raise DomainError(msg)
    if not 0 < p_q <= 1:
        msg = f"p must lie in (0, 1], got {p}"
        raise DomainError(msg)
    for n in range(1, THRESHOLD_SEARCH_LIMIT):
        if binomial_condition_holds(n, alpha_q, p_q):
            return n
    msg = f"No threshold below {THRESHOLD_SEARCH_LIMIT} for alpha={alpha}, p={p}"
    raise DomainError(msg)


def q_upper_bound(c: float) -> float:
    """Upper bound on the decoherence proportion ``q`` for ``p-c``-chaotic networks.

    ``0.75 + ln(c / 2) / (2 ln 0.75)``, decreasing from 1 at ``sqrt(3)`` to
    0.75 at 2; clamped to 1 for ``1 < c <= sqrt(3)``.
    """
    if c <= 1 or c > 2:  # noqa: PLR2004
        msg = f"q_upper_bound is defined for 1 < c <= 2, got {c}"
        raise DomainError(msg)
    if c <= SQRT3:
        return 1.0
    return 0.75 + math.log(0.5 * c) / (2 * math.log(0.75))
