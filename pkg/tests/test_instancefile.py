"""Instance document parsing, validation diagnostics, and round-tripping."""

import pytest

from temptmenu import AssumptionViolated, GridSpec, PowerCost
from temptmenu.instancefile import (
    InstanceDocument,
    InstanceFileError,
    dump_instance,
    load_instance,
    parse_instance,
)
from helpers import running_instance

RUNNING = """
alternatives:
  - {id: A, u: 10, v: 10, c: 5}
  - {id: B, u: 8, v: 14, c: 5}
  - {id: C, u: 2, v: 16, c: 5}
cost_function:
  kind: piecewise_linear
  l: 0.5
  k: 2.0
  w: 1.0
"""


def test_parse_running_instance():
    doc = parse_instance(RUNNING)
    assert doc.instance == running_instance()
    assert doc.tolerance is None
    assert doc.grid is None


def test_parse_power_cost_and_overrides():
    text = """
alternatives:
  - {id: A, u: 10, v: 10, c: 5}
  - {id: B, u: 8, v: 14, c: 5}
cost_function: {kind: power, alpha: 1.0, gamma: 2.0}
solver:
  tolerance: 1.0e-9
  grid: {price_step: 0.5, price_min: 0.0, price_max: 15.0}
"""
    doc = parse_instance(text)
    assert doc.instance.cost_fn == PowerCost(alpha=1.0, gamma=2.0)
    assert doc.tolerance == 1e-9
    assert doc.grid == GridSpec(price_step=0.5, price_min=0.0, price_max=15.0)


def test_round_trip_identity():
    doc = parse_instance(RUNNING)
    again = parse_instance(dump_instance(doc))
    assert again.instance == doc.instance

    full = InstanceDocument(
        doc.instance,
        tolerance=1e-9,
        grid=GridSpec(price_step=0.05, price_min=0.0, price_max=17.3),
    )
    again = parse_instance(dump_instance(full))
    assert again == full


def test_yaml_error_carries_position():
    with pytest.raises(InstanceFileError, match=r"line \d+"):
        parse_instance("alternatives:\n  - {id: A, u: 10\n")


def test_missing_key_names_path():
    bad = RUNNING.replace("u: 10, ", "", 1)
    with pytest.raises(InstanceFileError, match=r"alternatives\[0\]"):
        parse_instance(bad)


def test_unknown_cost_kind():
    with pytest.raises(InstanceFileError, match="kind"):
        parse_instance(RUNNING.replace("piecewise_linear", "quadratic"))


def test_non_numeric_field():
    with pytest.raises(InstanceFileError, match="expected a number"):
        parse_instance(RUNNING.replace("u: 10", "u: ten"))


def test_bad_cost_parameters_are_flagged():
    with pytest.raises(InstanceFileError, match="k > 1 > l > 0"):
        parse_instance(RUNNING.replace("k: 2.0", "k: 0.9"))


def test_assumption_violation_propagates():
    tied = RUNNING.replace("{id: C, u: 2, v: 16, c: 5}", "{id: C, u: 10, v: 14, c: 5}")
    with pytest.raises(AssumptionViolated):
        parse_instance(tied)


def test_load_instance_from_disk(tmp_path):
    path = tmp_path / "inst.yaml"
    path.write_text(RUNNING, encoding="utf-8")
    doc = load_instance(str(path))
    assert doc.instance == running_instance()
