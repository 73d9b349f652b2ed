"""Friendliness of the robust coding scheme for a growth rate ``c``.

A pair ``(k, eps)`` is c-friendly when ``log2(c) * (1 + eps) < 1`` and
``|C_k| >= 2 ** (k / (1 + eps))``. With ``e = k / (1 + eps)`` integral the
first inequality is the integer comparison ``c ** k < 2 ** e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from coopnet.coding.robust import robust_codes_count
from coopnet.errors import DomainError
from coopnet.log import get_logger
from coopnet.utils import as_fraction


logger = get_logger("coding.friendliness")

EXACT_EXPONENT_CAP = 4096
"""Largest power of ``c`` evaluated with exact rationals."""

FLOAT_GUARD = 2.0**-50
PAIR_SEARCH_LIMIT = 2000


@dataclass(frozen=True)
class FriendlinessParams:
    """Block width ``k``, slack ``epsilon`` and growth rate ``c``."""

    k: int
    epsilon: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.k < 2 or self.k % 2:  # noqa: PLR2004
            msg = f"k must be even and at least 2, got {self.k}"
            raise DomainError(msg)
        if self.epsilon <= 0:
            msg = f"epsilon must be positive, got {self.epsilon}"
            raise DomainError(msg)
        if not 1 < self.c < 2:  # noqa: PLR2004
            msg = f"c must lie in (1, 2), got {self.c}"
            raise DomainError(msg)
        if (self.k / (1 + self.epsilon)).denominator != 1:
            msg = f"k / (1 + epsilon) = {self.k / (1 + self.epsilon)} is not an integer"
            raise DomainError(msg)

    @property
    def exponent(self) -> int:
        """``k / (1 + epsilon)``."""
        return int(self.k / (1 + self.epsilon))


@dataclass(frozen=True)
class FriendlinessVerdict:
    ok: bool
    log_condition: bool
    size_condition: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _log_condition(c: Fraction, epsilon: Fraction) -> bool:
    """``log2(c) * (1 + epsilon) < 1``."""
    ratio = 1 + epsilon
    if ratio.numerator <= EXACT_EXPONENT_CAP:
        # c^(P/Q) < 2  <=>  c^P < 2^Q
        return c**ratio.numerator < 2**ratio.denominator
    value = math.log2(c) * float(ratio)
    if abs(value - 1) < FLOAT_GUARD:
        msg = f"log2(c) * (1 + epsilon) is within 2^-50 of 1 for c={c}, epsilon={epsilon}"
        raise DomainError(msg)
    return value < 1


def is_c_friendly(params: FriendlinessParams) -> FriendlinessVerdict:
    """Check both friendliness inequalities exactly."""
    count = robust_codes_count(params.k)
    e = params.exponent
    log_ok = _log_condition(params.c, params.epsilon)
    size_ok = count >= 2**e
    reasons = []
    if not log_ok:
        reasons.append(f"log2({params.c}) * (1 + {params.epsilon}) >= 1")
    if not size_ok:
        reasons.append(f"|C_{params.k}| = {count} < 2^{e} = {2**e}")
    return FriendlinessVerdict(log_ok and size_ok, log_ok, size_ok, reasons)


def find_friendly_pair(c: float | Fraction, max_k: int = PAIR_SEARCH_LIMIT) -> FriendlinessParams:
    """Smallest even ``k`` (with its smallest admissible exponent) that is c-friendly.

    For each ``k`` the exponent ``e = k / (1 + eps)`` is the least integer with
    ``c ** k < 2 ** e``; it must also satisfy ``2 ** (2e) < 3 ** k`` and
    ``e < k``, and ``|C_k| >= 2 ** e``.
    """
    c_q = as_fraction(c)
    if c_q <= 1:
        msg = f"c must exceed 1, got {c}"
        raise DomainError(msg)
    if c_q * c_q >= 3:  # noqa: PLR2004
        msg = f"c must be below sqrt(3) for the robust coding scheme, got {c}"
        raise DomainError(msg)
    for k in range(2, max_k + 1, 2):
        power = c_q**k
        e = max(1, math.floor(k * math.log2(c_q)))
        while power >= 2**e:
            e += 1
        while e > 1 and power < 2 ** (e - 1):
            e -= 1
        if e >= k or 4**e >= 3**k or robust_codes_count(k) < 2**e:
            continue
        params = FriendlinessParams(k, Fraction(k, e) - 1, c_q)
        if is_c_friendly(params):
            logger.debug("Friendly pair for c=%s: k=%d, epsilon=%s", c, k, params.epsilon)
            return params
    msg = f"No c-friendly pair with k <= {max_k} for c={c}"
    raise DomainError(msg)


@dataclass(frozen=True)
class OpaqueScheme:
    """A coding scheme known only by name and its friendliness bound."""

    name: str
    friendliness_bound: float
    """Every ``c`` strictly below this value admits a friendly pair."""
    note: str = ""


SUBTLE_CODING = OpaqueScheme(
    name="subtle",
    friendliness_bound=10**0.25,
    note="c-friendly for every c < 10^(1/4); circuit internals not provided",
)
