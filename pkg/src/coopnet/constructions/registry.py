"""Named constructions with pydantic parameter models.

A ``kind: "construction"`` network document stores a name, its parameters
and a seed; :func:`build_construction` rebuilds the network bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from coopnet.coding.robust import RobustScheme
from coopnet.constructions.counter import CounterParams, build_counter_tape_network
from coopnet.constructions.decoherence import (
    DecoherenceFamilyParams,
    build_decoherence_family_network,
)
from coopnet.constructions.extension import (
    PartialFunction,
    greatest_extension,
    monotone_extension,
    random_incomparable_domain,
)
from coopnet.constructions.gadgets import build_copy_tape
from coopnet.constructions.oscillating import OscillatingParams, build_oscillating_network
from coopnet.log import get_logger
from coopnet.netcore import ConstructionSource, RuleNetwork
from coopnet.utils import random_bits


if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from coopnet.netcore import BooleanNetwork, WiredNetwork


logger = get_logger("constructions.registry")


class CopyTapeParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(ge=2, description="Robust code width")
    ell: int = Field(ge=1, description="Code blocks per register")
    registers: int = Field(ge=2, description="Number of registers on the ring")


class ExtensionParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=1, le=24, description="Dimension")
    size: int = Field(ge=0, description="Number of listed domain states")
    dual: bool = Field(default=False, description="Build the greatest extension instead")
    seed: int = Field(description="Seed for domain and images")


def random_partial_function(n: int, size: int, rng: np.random.Generator) -> PartialFunction:
    """Random images on a random pairwise-incomparable domain."""
    domain = random_incomparable_domain(n, size, rng)
    return PartialFunction(n, tuple((a, random_bits(rng, n)) for a in domain))


def _build_extension(params: ExtensionParams) -> RuleNetwork:
    pf = random_partial_function(params.n, params.size, np.random.default_rng(params.seed))
    rule = greatest_extension(pf) if params.dual else monotone_extension(pf)
    return RuleNetwork(params.n, rule)


def _build_counter(params: CounterParams) -> RuleNetwork:
    return build_counter_tape_network(params.moduli, params.scheme)


def _build_copy_tape(params: CopyTapeParams) -> WiredNetwork:
    return build_copy_tape(RobustScheme(params.k, params.ell), params.registers)


@dataclass(frozen=True)
class ConstructionEntry:
    name: str
    model: type[BaseModel]
    builder: Callable[[Any], BooleanNetwork]
    description: str


REGISTRY: dict[str, ConstructionEntry] = {
    entry.name: entry
    for entry in (
        ConstructionEntry(
            "oscillating",
            OscillatingParams,
            build_oscillating_network,
            "Two complementary cycles with a parity funnel (not cooperative)",
        ),
        ConstructionEntry(
            "decofam",
            DecoherenceFamilyParams,
            build_decoherence_family_network,
            "Cooperative nested long cycles entered by weight",
        ),
        ConstructionEntry(
            "counter",
            CounterParams,
            _build_counter,
            "Robust-coded modular counters, one per block",
        ),
        ConstructionEntry(
            "copytape",
            CopyTapeParams,
            _build_copy_tape,
            "Closed ring of AND/OR copy layers (strictly bi-quadratic)",
        ),
        ConstructionEntry(
            "extension",
            ExtensionParams,
            _build_extension,
            "Monotone extension of a random map on an incomparable domain",
        ),
    )
}


def get_entry(name: str) -> ConstructionEntry:
    try:
        return REGISTRY[name]
    except KeyError:
        msg = f"Unknown construction {name!r}; known: {', '.join(sorted(REGISTRY))}"
        raise KeyError(msg) from None


def build_construction(
    name: str,
    params: Mapping[str, Any],
    *,
    seed: int | None = None,
) -> BooleanNetwork:
    """Validate ``params`` against the named model and build the network.

    Raises:
        KeyError: unknown construction name.
        pydantic.ValidationError: parameters do not fit the model.
        ConstructionError: parameters are infeasible for the construction.
    """
    entry = get_entry(name)
    data = dict(params)
    if seed is not None and "seed" in entry.model.model_fields:
        data["seed"] = seed
    model = entry.model.model_validate(data)
    net = entry.builder(model)
    if isinstance(net, RuleNetwork):
        source = ConstructionSource(name, model.model_dump(mode="json"), seed)
        net = replace(net, source=source)
    logger.debug("Built construction %s with n=%d", name, net.n)
    return net
