"""
随机 / 穷举生成器与 a-正片段
"""

import random

import pytest

from rmlkit import gallery
from rmlkit.generators import (
    all_models,
    enumerate_formulas,
    is_positive,
    positive_formulas,
    random_formula,
    random_model,
)
from rmlkit.kripke import check_refinement, validate_pointed
from rmlkit.modelcheck import enumerate_refinements, evaluate
from rmlkit.parser import parse


def test_random_model_is_reproducible():
    first = random_model(random.Random(7))
    second = random_model(random.Random(7))
    assert first == second
    validate_pointed(first)


def test_all_models_count():
    # 一个主体一个命题两个状态：2^4 种关系 × 2^2 种赋值
    assert sum(1 for _ in all_models(2)) == 64


def test_random_formula_depth(rng):
    for _ in range(50):
        f = random_formula(rng, depth=2)
        assert f.refinement_free
    assert any(
        not random_formula(rng, depth=3, quantifiers=True).refinement_free for _ in range(50)
    )


def test_enumerate_formulas_are_distinct():
    formulas = enumerate_formulas(1)
    assert len(formulas) == len(set(formulas))
    assert parse("[a]p") in formulas
    assert parse("p & ~p") in formulas


@pytest.mark.parametrize(
    "text, positive",
    [
        ("<a>p & [b]~q", True),
        ("[a]p", False),
        ("~<a>p", False),
        ("<a>(p | [b]top)", True),
        ("p -> q", False),
    ],
)
def test_is_positive(text, positive):
    assert is_positive(parse(text), "a") is positive


def test_positive_formulas_are_positive():
    formulas = positive_formulas(("a", "b"), ("p",), "a", 2)
    assert formulas
    assert all(is_positive(f, "a") for f in formulas)


@pytest.mark.slow
def test_positive_formulas_survive_refinement():
    # a-正公式在 a-精化上成立，则在原模型上也成立
    formulas = positive_formulas(("a",), ("p",), "a", 2)
    for pointed in all_models(2):
        for refined in enumerate_refinements(pointed, "a", depth=1, dup=1, limit=20):
            assert check_refinement(pointed, refined, {"a"}).holds
            for f in formulas:
                if evaluate(refined, f):
                    assert evaluate(pointed, f), f.text


def test_positive_formula_survives_on_gallery():
    chain, fork = gallery.chain(4), gallery.backward_fork()
    for f in positive_formulas(("a",), (), "a", 3):
        if evaluate(fork, f):
            assert evaluate(chain, f), f.text


def test_positive_formula_not_reflected_upwards():
    # 反方向不成立：链上的 ◇◇◇⊤ 在其精化分叉上为假
    f = parse("<a><a><a>top")
    assert is_positive(f, "a")
    assert evaluate(gallery.chain(4), f)
    assert not evaluate(gallery.backward_fork(), f)
