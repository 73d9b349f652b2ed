"""Network documents: JSON files with a ``kind`` discriminator.

Three kinds exist::

    {"kind": "wired", "n": 2, "nodes": [{"inputs": [0, 1], "table": "0001"}, ...]}
    {"kind": "table", "n": 2, "next": [0, 2, 2, 3]}
    {"kind": "construction", "n": 10, "name": "oscillating", "params": {...}, "seed": 7}

Truth tables are indexed by the integer whose bit ``j`` is the value of the
``j``-th listed input. Table entries and all states are little-endian integers
(bit ``i`` is coordinate ``i``).
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from coopnet.errors import FormatErrorDetail, NetworkFormatError
from coopnet.log import get_logger
from coopnet.netcore.network import (
    BooleanNetwork,
    ConstructionSource,
    Node,
    RuleNetwork,
    TableRule,
    WiredNetwork,
)


if TYPE_CHECKING:
    import os


logger = get_logger("netcore.serialization")


class NodeDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", use_attribute_docstrings=True)

    inputs: list[NonNegativeInt]
    """Ordered input coordinates; the first one is the least significant table bit."""

    table: Annotated[str, Field(pattern=r"^[01]+$")]
    """Truth table of length ``2 ** len(inputs)``."""

    @model_validator(mode="after")
    def _check_table_length(self) -> NodeDocument:
        expected = 1 << len(self.inputs)
        if len(self.table) != expected:
            msg = f"table has length {len(self.table)}, expected {expected} for {len(self.inputs)} inputs"  # noqa: E501
            raise ValueError(msg)
        return self


class WiredDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["wired"]
    n: PositiveInt
    nodes: list[NodeDocument]

    @model_validator(mode="after")
    def _check_nodes(self) -> WiredDocument:
        if len(self.nodes) != self.n:
            msg = f"{len(self.nodes)} nodes given for n={self.n}"
            raise ValueError(msg)
        for i, node in enumerate(self.nodes):
            if any(source >= self.n for source in node.inputs):
                msg = f"node {i} reads an input outside [0, {self.n})"
                raise ValueError(msg)
        return self


class TableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["table"]
    n: PositiveInt
    next: list[NonNegativeInt]

    @model_validator(mode="after")
    def _check_entries(self) -> TableDocument:
        if len(self.next) != 1 << self.n:
            msg = f"table has {len(self.next)} entries, expected {1 << self.n}"
            raise ValueError(msg)
        if any(value >> self.n for value in self.next):
            msg = f"table entries must be states of dimension {self.n}"
            raise ValueError(msg)
        return self


class ConstructionDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["construction"]
    n: PositiveInt
    name: str
    params: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None


NetworkDocument = Annotated[
    WiredDocument | TableDocument | ConstructionDocument,
    Field(discriminator="kind"),
]

document_adapter: TypeAdapter[WiredDocument | TableDocument | ConstructionDocument] = TypeAdapter(
    NetworkDocument
)


def to_document(net: BooleanNetwork) -> WiredDocument | TableDocument | ConstructionDocument:
    """Describe ``net`` as a document model."""
    match net:
        case WiredNetwork():
            nodes = [NodeDocument(inputs=list(node.inputs), table=node.table) for node in net.nodes]
            return WiredDocument(kind="wired", n=net.n, nodes=nodes)
        case RuleNetwork(rule=TableRule() as rule):
            return TableDocument(kind="table", n=net.n, next=list(rule.next))
        case RuleNetwork(source=ConstructionSource() as source):
            return ConstructionDocument(
                kind="construction",
                n=net.n,
                name=source.name,
                params=source.params,
                seed=source.seed,
            )
        case _:
            msg = (
                f"{type(net).__name__} carries no construction source; "
                "materialise it with to_table_network() before saving"
            )
            raise TypeError(msg)


def from_document(document: WiredDocument | TableDocument | ConstructionDocument) -> BooleanNetwork:
    """Rebuild a network from a validated document."""
    match document:
        case WiredDocument():
            nodes = tuple(Node(tuple(node.inputs), node.table) for node in document.nodes)
            return WiredNetwork(document.n, nodes)
        case TableDocument():
            return RuleNetwork(document.n, TableRule(document.n, tuple(document.next)))
        case ConstructionDocument():
            from coopnet.constructions.registry import build_construction

            try:
                net = build_construction(document.name, document.params, seed=document.seed)
            except ValidationError as e:
                error = NetworkFormatError.from_validation_error(e)
                for detail in error.details:
                    detail.loc = ("params", *detail.loc)
                raise NetworkFormatError(error.details) from e
            except KeyError as e:
                detail = FormatErrorDetail("unknown_construction", str(e), ("name",))
                raise NetworkFormatError([detail]) from e
            if net.n != document.n:
                msg = f"construction builds n={net.n}, document declares n={document.n}"
                raise NetworkFormatError([FormatErrorDetail("value_error", msg, ("n",))])
            return net
        case _:
            msg = f"Unsupported document type {type(document).__name__}"
            raise TypeError(msg)


def dumps_network(net: BooleanNetwork) -> str:
    return to_document(net).model_dump_json(indent=2)


def loads_network(text: str | bytes) -> BooleanNetwork:
    """Parse a JSON network document.

    Raises:
        NetworkFormatError: On malformed JSON, unknown kinds or invalid payloads
    """
    try:
        document = document_adapter.validate_json(text)
    except ValidationError as e:
        raise NetworkFormatError.from_validation_error(e) from e
    return from_document(document)


def save_network(net: BooleanNetwork, destination: str | os.PathLike[str]) -> Path:
    path = Path(destination)
    path.write_text(dumps_network(net) + "\n", encoding="utf-8")
    logger.debug("Saved %s network (n=%d) to %s", type(net).__name__, net.n, path)
    return path


def load_network(source: str | os.PathLike[str]) -> BooleanNetwork:
    return loads_network(Path(source).read_bytes())
