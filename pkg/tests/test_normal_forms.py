"""
覆盖算子、化简与析取范式
"""

import pytest

from rmlkit.errors import BudgetExceededError, RefinementQuantifierError, RelationMismatchError
from rmlkit.generators import all_models, enumerate_formulas, random_formula, random_model
from rmlkit.modelcheck import evaluate
from rmlkit.normal_forms import (
    box_diamond_to_cover,
    is_disjunctive,
    merge_covers,
    simplify,
    to_disjunctive,
)
from rmlkit.syntax import (
    BOTTOM,
    TOP,
    And,
    Box,
    Cover,
    Diamond,
    Not,
    Or,
    Prop,
    SomeRef,
)

p, q = Prop("p"), Prop("q")

SMALL_MODELS = list(all_models(2))


def _equivalent_on_small_models(f, g) -> bool:
    return all(evaluate(m, f) == evaluate(m, g) for m in SMALL_MODELS)


def test_box_and_diamond_as_covers():
    assert box_diamond_to_cover(Box("a", p)) == Or(Cover("a", ()), Cover("a", (p,)))
    assert box_diamond_to_cover(Diamond("a", p)) == Cover("a", (p, TOP))


def test_cover_translation_preserves_truth(rng):
    for _ in range(30):
        f = random_formula(rng, depth=3, agents=("a",), props=("p",))
        assert _equivalent_on_small_models(f, box_diamond_to_cover(f))


def test_cover_translation_rejects_quantifiers():
    with pytest.raises(RefinementQuantifierError):
        box_diamond_to_cover(SomeRef("a", p))


@pytest.mark.parametrize(
    "first, second",
    [
        (Cover("a", (p,)), Cover("a", (Not(p), TOP))),
        (Cover("a", ()), Cover("a", (p,))),
        (Cover("a", (p, q)), Cover("a", (q,))),
        (Cover("a", (Diamond("a", p),)), Cover("a", (Box("a", BOTTOM), TOP))),
    ],
)
def test_merge_covers_is_conjunction(first, second):
    merged = merge_covers(first, second)
    assert merged.agent == "a"
    assert _equivalent_on_small_models(And(first, second), merged)


def test_merge_covers_requires_same_agent():
    with pytest.raises(RelationMismatchError):
        merge_covers(Cover("a", (p,)), Cover("b", (p,)))


@pytest.mark.parametrize(
    "formula, expected",
    [
        (And(Diamond("a", TOP), Diamond("a", p)), Diamond("a", p)),
        (Or(p, Not(p)), TOP),
        (And(p, Not(p)), BOTTOM),
        (And(p, Or(p, q)), p),
        (Or(p, And(p, q)), p),
        (Box("a", TOP), TOP),
        (Diamond("a", BOTTOM), BOTTOM),
        (Cover("a", (BOTTOM, p)), BOTTOM),
        (Not(Not(q)), q),
        (Or(Box("a", BOTTOM), Box("a", p)), Box("a", p)),
    ],
)
def test_simplify_examples(formula, expected):
    assert simplify(formula) == expected


def test_simplify_preserves_truth(rng):
    for _ in range(40):
        f = random_formula(rng, depth=3, agents=("a",), props=("p",))
        assert _equivalent_on_small_models(f, simplify(f))


def test_disjunctive_form_preserves_truth(rng):
    for _ in range(40):
        f = random_formula(rng, depth=3, agents=("a",), props=("p",))
        df = to_disjunctive(f)
        assert is_disjunctive(df.formula)
        assert _equivalent_on_small_models(f, df.formula)


def test_disjunctive_form_of_unsatisfiable_formulas():
    assert to_disjunctive(BOTTOM).conjuncts == ()
    assert to_disjunctive(And(p, Not(p))).conjuncts == ()
    # 成员为 ⊥ 的覆盖被丢弃
    assert to_disjunctive(Diamond("a", BOTTOM)).conjuncts == ()


def test_disjunctive_form_of_box():
    df = to_disjunctive(Box("a", p))
    assert {c.formula for c in df.conjuncts} == {Cover("a", ()), Cover("a", (p,))}


def test_disjunctive_form_keeps_one_cover_per_agent():
    df = to_disjunctive(And(Diamond("a", p), And(Box("a", q), Diamond("b", p))))
    assert len(df.conjuncts) == 1
    conjunct = df.conjuncts[0]
    assert [agent for agent, _ in conjunct.covers] == ["a", "b"]
    assert conjunct.propositional == TOP


def test_disjunctive_form_budget():
    wide = Or(Or(p, q), Or(Not(p), Not(q)))
    with pytest.raises(BudgetExceededError):
        to_disjunctive(wide, max_conjuncts=2)


def test_is_disjunctive():
    assert is_disjunctive(Cover("a", (p,)))
    assert is_disjunctive(Or(And(p, Cover("a", ())), Cover("b", (TOP,))))
    assert not is_disjunctive(Box("a", p))
    assert not is_disjunctive(And(Cover("a", ()), Cover("a", (p,))))


@pytest.mark.slow
def test_disjunctive_form_agrees_on_every_small_formula(small_models):
    # 单主体、模态深度 <= 2 的全部枚举公式，3 个状态以内的模型
    for f in enumerate_formulas(2, ("a",), ("p",)):
        df = to_disjunctive(f).formula
        assert is_disjunctive(df), f.text
        for pointed in small_models:
            assert evaluate(pointed, f) == evaluate(pointed, df), f.text


def test_disjunctive_form_agrees_with_two_agents(rng):
    models = [
        random_model(rng, max_states=3, agents=("a", "b"), props=("p",)) for _ in range(60)
    ]
    for f in enumerate_formulas(1, ("a", "b"), ("p",)):
        df = to_disjunctive(f).formula
        assert is_disjunctive(df), f.text
        for pointed in models:
            assert evaluate(pointed, f) == evaluate(pointed, df), f.text


@pytest.mark.parametrize(
    "first, second",
    [
        (Cover("a", (p,)), Cover("a", (Not(p), TOP))),
        (Cover("a", ()), Cover("a", (p,))),
        (Cover("a", (p, Diamond("a", p))), Cover("a", (Box("a", BOTTOM),))),
    ],
)
def test_merge_covers_on_three_state_models(first, second, small_models):
    merged = merge_covers(first, second)
    for pointed in small_models:
        assert evaluate(pointed, merged) == evaluate(pointed, And(first, second))
