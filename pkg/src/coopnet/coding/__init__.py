"""Robust constant-weight codes and their friendliness checks."""

from __future__ import annotations

from coopnet.coding.friendliness import (
    SUBTLE_CODING,
    FriendlinessParams,
    FriendlinessVerdict,
    OpaqueScheme,
    find_friendly_pair,
    is_c_friendly,
)
from coopnet.coding.robust import (
    RobustScheme,
    codebook_text,
    decode_word,
    encode_word,
    enumerate_robust_codes,
    is_crude,
    robust_codes_count,
)

__all__ = [
    "SUBTLE_CODING",
    "FriendlinessParams",
    "FriendlinessVerdict",
    "OpaqueScheme",
    "RobustScheme",
    "codebook_text",
    "decode_word",
    "encode_word",
    "enumerate_robust_codes",
    "find_friendly_pair",
    "is_c_friendly",
    "is_crude",
    "robust_codes_count",
]
