"""
JSON 读写与 DOT 导出
"""

import json

import pytest

from rmlkit import gallery
from rmlkit.decision import ValidityResult
from rmlkit.errors import FormulaSyntaxError, InputFormatError, ModelValidationError
from rmlkit.io import (
    action_from_dict,
    action_to_dict,
    dumps,
    load_action,
    load_model,
    model_from_dict,
    model_to_dict,
    relation_to_list,
    trace_to_list,
    validity_to_dict,
)
from rmlkit.kripke import check_bisimulation, check_refinement
from rmlkit.parser import parse
from rmlkit.reduction import reduce
from rmlkit.render import action_to_dot, model_to_dot

UNCERTAIN = {
    "states": ["0", "1"],
    "point": "1",
    "valuation": {"p": ["1"]},
    "relations": {
        "a": [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]],
        "b": [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]],
    },
}


def test_model_from_dict(uncertain):
    pointed = model_from_dict(UNCERTAIN)
    assert pointed.point == "1"
    assert check_bisimulation(uncertain, pointed).holds
    assert model_to_dict(pointed) == UNCERTAIN


def test_model_defaults_to_empty_relations():
    pointed = model_from_dict({"states": ["s"], "point": "s"})
    assert pointed.model.agents == ()
    assert pointed.model.props == ()


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"states": ["s"]},
        {"states": ["s"], "point": "s", "worlds": []},
        {"states": "s", "point": "s"},
        {"states": ["s"], "point": "s", "relations": {"a": [["s"]]}},
        {"states": ["s"], "point": "s", "valuation": ["p"]},
    ],
)
def test_model_format_errors(data):
    with pytest.raises(InputFormatError):
        model_from_dict(data)


def test_model_invariant_errors():
    with pytest.raises(ModelValidationError):
        model_from_dict({"states": ["s"], "point": "t"})
    with pytest.raises(ModelValidationError):
        model_from_dict({"states": [], "point": "s"})


def test_action_round_trip():
    action = gallery.a_learns_p_action()
    data = action_to_dict(action)
    assert data["pre"] == {"p": "p", "t": "top"}
    assert data["states"] == ["p", "t"]
    loaded = action_from_dict(data)
    assert loaded.point == "p"
    assert loaded.action.pre["p"] == parse("p")


def test_action_formula_errors():
    data = {"states": ["e"], "point": "e", "pre": {"e": "p &"}, "relations": {}}
    with pytest.raises(FormulaSyntaxError):
        action_from_dict(data)


def test_load_from_files(tmp_path, uncertain):
    model_file = tmp_path / "m.json"
    model_file.write_text(json.dumps(UNCERTAIN), encoding="utf-8")
    assert check_bisimulation(uncertain, load_model(model_file)).holds

    action_file = tmp_path / "a.json"
    action_file.write_text(dumps(action_to_dict(gallery.a_learns_p_action())), encoding="utf-8")
    assert load_action(action_file).point == "p"

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_model(broken)


def test_result_serialization(left, right):
    witness = check_refinement(right, left, {"a"}).witness
    assert relation_to_list(witness) == [["4", "1"], ["5", "2"], ["6", "3"]]
    assert validity_to_dict(ValidityResult(True)) == {"valid": True, "countermodel": None}
    _, trace = reduce(parse("E_a <a>p"))
    steps = trace_to_list(trace)
    assert steps
    assert set(steps[0]) == {"rule", "before", "after"}


def test_dumps_is_sorted():
    assert dumps({"b": 1, "a": "精化"}) == '{\n  "a": "精化",\n  "b": 1\n}'


def test_model_to_dot(uncertain):
    dot = model_to_dot(uncertain)
    assert dot.startswith("digraph M {")
    assert '"1" [label="1: p", peripheries=2];' in dot
    assert '"0" [label="0"];' in dot
    assert '"0" -> "1" [label="a,b"];' in dot
    assert dot.endswith("}\n")


def test_action_to_dot():
    dot = action_to_dot(gallery.a_learns_p_action(), name="learn")
    assert dot.startswith("digraph learn {")
    assert '"p" [label="p: p", peripheries=2];' in dot
    assert '"t" [label="t: top"];' in dot
    assert '"t" -> "p" [label="b"];' in dot


def test_model_with_unreadable_prop_is_rejected():
    with pytest.raises(ModelValidationError):
        model_from_dict({"states": ["s"], "point": "s", "valuation": {"E_a": ["s"]}})
