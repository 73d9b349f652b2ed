"""Experiment configuration and parameter introspection for reports and listings."""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
import inspect
from textwrap import dedent
from typing import TYPE_CHECKING, Any

import fieldz


if TYPE_CHECKING:
    from pydantic import BaseModel


def get_dataclass_field_docs(cls: type) -> dict[str, str]:
    """Attribute docstrings of a class, read from its source."""
    try:
        tree = ast.parse(dedent(inspect.getsource(cls)))
    except (OSError, TypeError, SyntaxError):
        return {}
    docs = {}
    for cls_node in ast.iter_child_nodes(tree):
        if not isinstance(cls_node, ast.ClassDef):
            continue
        field_name = None
        for node in cls_node.body:
            if isinstance(node, ast.AnnAssign) and isinstance(node.target, ast.Name):
                field_name = node.target.id
            elif (
                field_name
                and isinstance(node, ast.Expr)
                and isinstance(node.value, ast.Constant)
                and isinstance(node.value.value, str)
            ):
                docs[field_name] = inspect.cleandoc(node.value.value)
                field_name = None
            else:
                field_name = None
    return docs


@dataclass
class ExperimentConfig:
    """Everything a command ran with; written into the header of every report."""

    command: str
    """Subcommand that produced the report."""

    seed: int | None = None
    """Seed of the per-sample PRNG streams (required for randomized runs)."""

    network: str | None = None
    """Network document the command read."""

    construction: str | None = None
    """Construction name for build runs."""

    metric: str | None = None
    """Metric or analysis kind."""

    params: dict[str, Any] = field(default_factory=dict)
    """Construction or metric parameters."""

    samples: int | None = None
    """Number of Monte-Carlo samples."""

    budget: int | None = None
    """Step budget of each cycle detection."""

    workers: int = 1
    """Worker processes for sample loops."""

    sampler: str = "uniform"
    """Initial-state sampler (uniform, coding, z)."""

    direction: str = "toggle"
    """Flip direction of perturbed pairs (toggle, up, down)."""

    max_inconclusive: float = 0.01
    """Largest tolerated share of budget-exhausted samples."""

    csv_path: str | None = None
    """Per-sample CSV destination."""

    summary_path: str | None = None
    """Summary document destination."""

    def require_seed(self) -> int:
        if self.seed is None:
            msg = f"{self.command} draws random samples and needs an explicit --seed"
            raise ValueError(msg)
        return self.seed


@dataclass(frozen=True)
class ConfigEntry:
    name: str
    value: Any
    description: str | None
    is_default: bool


def describe_config(config: Any) -> list[ConfigEntry]:
    """Every field of a dataclass instance with its value, description and default status."""
    docs = get_dataclass_field_docs(type(config))
    entries = []
    for f in fieldz.fields(type(config)):
        value = getattr(config, f.name)
        if f.default != fieldz.Field.MISSING:
            default: Any = f.default
        elif f.default_factory != fieldz.Field.MISSING:
            default = f.default_factory()  # type: ignore[misc]
        else:
            default = fieldz.Field.MISSING
        description = f.description or docs.get(f.name)
        entries.append(ConfigEntry(f.name, value, description, bool(value == default)))
    return entries


def config_header(config: Any) -> list[dict[str, Any]]:
    """JSON-ready header rows for a report."""
    return [
        {"name": e.name, "value": e.value, "default": e.is_default, "description": e.description}
        for e in describe_config(config)
    ]


@dataclass
class Constraints:
    """Validation constraints of one parameter, read from JSON schema."""

    min_value: float | None = None
    max_value: float | None = None
    exclusive_min: bool = False
    exclusive_max: bool = False
    min_items: int | None = None
    max_items: int | None = None
    allowed_values: list[Any] | None = None

    @classmethod
    def from_jsonschema(cls, schema: dict[str, Any]) -> Constraints:
        constraints = cls()
        if "minimum" in schema:
            constraints.min_value = schema["minimum"]
        if "maximum" in schema:
            constraints.max_value = schema["maximum"]
        if "exclusiveMinimum" in schema:
            constraints.min_value = schema["exclusiveMinimum"]
            constraints.exclusive_min = True
        if "exclusiveMaximum" in schema:
            constraints.max_value = schema["exclusiveMaximum"]
            constraints.exclusive_max = True
        if "minItems" in schema:
            constraints.min_items = schema["minItems"]
        if "maxItems" in schema:
            constraints.max_items = schema["maxItems"]
        if "enum" in schema:
            constraints.allowed_values = schema["enum"]
        return constraints

    def describe(self) -> str:
        parts = []
        if self.min_value is not None:
            parts.append(f"{'>' if self.exclusive_min else '>='} {self.min_value}")
        if self.max_value is not None:
            parts.append(f"{'<' if self.exclusive_max else '<='} {self.max_value}")
        if self.min_items is not None:
            parts.append(f"at least {self.min_items} items")
        if self.max_items is not None:
            parts.append(f"at most {self.max_items} items")
        if self.allowed_values is not None:
            parts.append("one of " + ", ".join(map(str, self.allowed_values)))
        return ", ".join(parts)


@dataclass(frozen=True)
class ParamField:
    name: str
    required: bool
    default: Any
    description: str | None
    constraints: Constraints

    def render(self) -> str:
        head = self.name if self.required else f"{self.name} = {self.default!r}"
        extras = [text for text in (self.constraints.describe(), self.description) if text]
        return f"{head}  ({'; '.join(extras)})" if extras else head


def model_param_fields(model: type[BaseModel]) -> list[ParamField]:
    """Parameters of a pydantic model with defaults from fieldz and constraints from its schema."""
    properties = model.model_json_schema().get("properties", {})
    result = []
    for f in fieldz.fields(model):
        required = f.default == fieldz.Field.MISSING and f.default_factory == fieldz.Field.MISSING
        schema = properties.get(f.name, {})
        result.append(
            ParamField(
                name=f.name,
                required=required,
                default=None if required else f.default,
                description=f.description or schema.get("description"),
                constraints=Constraints.from_jsonschema(schema),
            )
        )
    return result
