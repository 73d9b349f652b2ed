"""Tests for experiment configuration headers and parameter listings."""

from __future__ import annotations

from dataclasses import dataclass
import json

import pytest

from coopnet.config import (
    Constraints,
    ExperimentConfig,
    config_header,
    describe_config,
    get_dataclass_field_docs,
    model_param_fields,
)
from coopnet.constructions.counter import CounterParams
from coopnet.constructions.decoherence import DecoherenceFamilyParams
from coopnet.constructions.registry import ExtensionParams


@dataclass
class Sample:
    first: int
    """The first field."""

    second: str = "x"

    third: float = 1.0
    """Spans
    two lines."""


def test_field_docs_from_source():
    """Attribute docstrings are picked up; undocumented fields are skipped."""
    docs = get_dataclass_field_docs(Sample)
    assert docs == {"first": "The first field.", "third": "Spans\ntwo lines."}
    assert get_dataclass_field_docs(int) == {}


def test_describe_config_marks_defaults():
    config = ExperimentConfig(command="analyze", seed=3, samples=100)
    entries = {entry.name: entry for entry in describe_config(config)}
    assert entries["seed"].value == 3  # noqa: PLR2004
    assert not entries["seed"].is_default
    assert not entries["command"].is_default
    assert entries["workers"].is_default
    assert entries["params"].is_default
    assert entries["seed"].description is not None
    assert entries["seed"].description.startswith("Seed of the per-sample")


def test_config_header_is_json_ready():
    config = ExperimentConfig(command="build", construction="counter", params={"k": 4})
    header = config_header(config)
    assert [row["name"] for row in header][:4] == ["command", "seed", "network", "construction"]
    text = json.dumps(header)
    assert '"counter"' in text
    row = next(row for row in header if row["name"] == "params")
    assert row == {
        "name": "params",
        "value": {"k": 4},
        "default": False,
        "description": "Construction or metric parameters.",
    }


def test_require_seed():
    with pytest.raises(ValueError, match="--seed"):
        ExperimentConfig(command="analyze").require_seed()
    assert ExperimentConfig(command="analyze", seed=0).require_seed() == 0


def test_constraints_from_schema():
    constraints = Constraints.from_jsonschema({"exclusiveMinimum": 0, "maximum": 1})
    assert constraints.exclusive_min
    assert not constraints.exclusive_max
    assert constraints.describe() == "> 0, <= 1"
    assert Constraints.from_jsonschema({"enum": ["up", "down"]}).describe() == "one of up, down"
    assert Constraints().describe() == ""


def test_model_param_fields_of_counter():
    """Required parameters carry their bounds and descriptions."""
    fields = {f.name: f for f in model_param_fields(CounterParams)}
    assert list(fields) == ["moduli", "k", "ell"]
    assert all(f.required for f in fields.values())
    assert fields["k"].render() == "k  (>= 2; Robust code width)"
    assert fields["moduli"].constraints.min_items == 1


def test_model_param_fields_with_defaults():
    fields = {f.name: f for f in model_param_fields(ExtensionParams)}
    assert not fields["dual"].required
    assert fields["seed"].required
    assert fields["dual"].render() == "dual = False  (Build the greatest extension instead)"
    assert fields["n"].render() == "n  (>= 1, <= 24; Dimension)"
    alpha = {f.name: f for f in model_param_fields(DecoherenceFamilyParams)}["alpha"]
    assert alpha.constraints.describe() == "> 0, < 1"
