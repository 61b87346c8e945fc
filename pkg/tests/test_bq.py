"""
互模拟量化翻译与相对化
"""

import pytest

from rmlkit.bq import alpha_normalize, check_relativization_commutes, relativize, translate
from rmlkit.errors import RefinementQuantifierError, RelativizationPreconditionError
from rmlkit.generators import random_formula, random_model
from rmlkit.modelcheck import evaluate
from rmlkit.models import Model, PointedModel
from rmlkit.parser import parse
from rmlkit.syntax import (
    And,
    BisimAll,
    BisimSome,
    Box,
    Diamond,
    Implies,
    Prop,
)

p, q, r, x = Prop("p"), Prop("q"), Prop("r"), Prop("x")


def test_translate_nested_quantifiers():
    result = translate(parse("E_a E_b r"))
    assert result == BisimSome("_v0", BisimSome("_v1", r))
    assert result.text == "BE__v0 BE__v1 r"
    assert parse(result.text) == result
    assert result.refinement_free


def test_translate_relativizes_refined_agent():
    v = Prop("_v0")
    assert translate(parse("A_a [a]p")) == BisimAll("_v0", Box("a", Implies(v, p)))
    assert translate(parse("E_a <a>p & [b]q")) == And(
        BisimSome("_v0", Diamond("a", And(v, p))), Box("b", q)
    )


def test_relativize_clauses():
    assert relativize(parse("[a]p"), "a", "x") == Box("a", Implies(x, p))
    assert relativize(parse("<a>p"), "a", "x") == Diamond("a", And(x, p))
    assert relativize(parse("[b]<b>p"), "a", "x") == parse("[b]<b>p")
    assert relativize(parse("nabla_a {p}"), "a", "x") == parse("[a](x -> p) & <a>(x & p)")


def test_relativize_renames_captured_variable():
    result = relativize(parse("BE_x <a>x"), "a", "x")
    assert result == BisimSome("_v0", Diamond("a", And(x, Prop("_v0"))))


def test_relativize_rejects_quantifiers():
    with pytest.raises(RefinementQuantifierError):
        relativize(parse("E_a p"), "a", "x")


def _drop_arrows_outside(pointed: PointedModel, agent: str, prop: str) -> PointedModel:
    model = pointed.model
    keep = model.valuation.get(prop, frozenset())
    relations = dict(model.relations)
    relations[agent] = {(s, t) for s, t in relations.get(agent, ()) if t in keep}
    return PointedModel(Model(model.states, relations, model.valuation), pointed.point)


def test_relativization_is_arrow_restriction(rng):
    for _ in range(60):
        pointed = random_model(rng, max_states=3, agents=("a", "b"), props=("p", "x"))
        f = random_formula(rng, depth=3, agents=("a", "b"), props=("p",))
        restricted = _drop_arrows_outside(pointed, "a", "x")
        assert evaluate(pointed, relativize(f, "a", "x")) == evaluate(restricted, f)


def test_alpha_normalize():
    assert alpha_normalize(parse("BE_x <a>x")) == alpha_normalize(parse("BE_y <a>y"))
    assert alpha_normalize(parse("BE_x <a>x")) != alpha_normalize(parse("BE_x <a>y"))


@pytest.mark.parametrize(
    "text",
    ["[a][b]<a>p", "<a>p & [b]q -> nabla_a {p, q}", "BA_r (<b>r | [a]r)", "top"],
)
def test_relativizations_commute(text):
    assert check_relativization_commutes(parse(text), "a", "x", "b", "y")


@pytest.mark.parametrize(
    "args",
    [
        ("a", "x", "a", "y"),
        ("a", "x", "b", "x"),
        ("a", "r", "b", "y"),
    ],
)
def test_commutation_preconditions(args):
    with pytest.raises(RelativizationPreconditionError):
        check_relativization_commutes(parse("BE_r <a>r"), *args)
