"""
公式语法树、打印与解析
"""

import pytest

from rmlkit.errors import FormulaSyntaxError, RefinementQuantifierError
from rmlkit.generators import all_models, random_formula
from rmlkit.modelcheck import evaluate
from rmlkit.parser import formula_lines, parse
from rmlkit.syntax import (
    BOTTOM,
    TOP,
    AllRef,
    And,
    BisimSome,
    Box,
    Cover,
    Diamond,
    Implies,
    Not,
    Or,
    Prop,
    SomeRef,
    conjunction,
    disjunction,
    fresh_prop,
    free_props,
    is_identifier,
    modal_depth,
    quantifier_count,
    require_refinement_free,
    substitute,
    to_nnf,
)

p, q, r = Prop("p"), Prop("q"), Prop("r")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p", p),
        ("top", TOP),
        ("bottom", BOTTOM),
        ("~p", Not(p)),
        ("[a]p", Box("a", p)),
        ("<b>q", Diamond("b", q)),
        ("p & q | r", Or(And(p, q), r)),
        ("p -> q -> r", Implies(p, Implies(q, r))),
        ("E_a [a]p", SomeRef("a", Box("a", p))),
        ("forall_b p", AllRef("b", p)),
        ("exists_a p", SomeRef("a", p)),
        ("BE__v0 r", BisimSome("_v0", r)),
        ("E_{a,b} r", SomeRef("a", SomeRef("b", r))),
    ],
)
def test_parse_examples(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize(
    "formula, text",
    [
        (And(Box("a", p), Not(Box("b", Box("a", p)))), "[a]p & ~[b][a]p"),
        (And(p, And(q, r)), "p & (q & r)"),
        (And(And(p, q), r), "p & q & r"),
        (Implies(Implies(p, q), r), "(p -> q) -> r"),
        (SomeRef("a", Or(p, q)), "E_a (p | q)"),
        (Diamond("a", Diamond("a", Diamond("a", Box("a", BOTTOM)))), "<a><a><a>[a]bottom"),
    ],
)
def test_print(formula, text):
    assert formula.text == text
    assert parse(text) == formula


def test_print_parse_round_trip_on_random_formulas(rng):
    for _ in range(200):
        f = random_formula(rng, depth=4, quantifiers=True)
        assert parse(f.text) == f


def test_cover_members_are_canonical():
    first = Cover("a", (q, p, q))
    second = Cover("a", (p, q))
    assert first == second
    assert first.text == "nabla_a {p, q}"
    assert parse("nabla_a {q, p}") == first
    assert parse("nabla_a {}") == Cover("a", ())


def test_bare_quantifier_uses_agent_universe():
    f = parse("E ([a]p & ~[b][a]p)")
    assert f == SomeRef("a", SomeRef("b", And(Box("a", p), Not(Box("b", Box("a", p))))))
    g = parse("A p", agents=["b", "c"])
    assert g == AllRef("b", AllRef("c", p))


def test_formula_lines_skip_comments_and_blank_lines():
    lines = formula_lines(["# 注释\n", "\n", "  p  \n", "[a]q"])
    assert lines == ["p", "[a]q"]
    formulas = [parse(line) for line in lines]
    assert formulas == [p, Box("a", q)]


# 关键字与运算符前缀之外的名字都能原样读回
@pytest.mark.parametrize(
    "name", ["p", "q1", "_v0", "Apple", "Ex", "BAx", "nablax", "alpha_beta", "topx", "forallx"]
)
def test_identifier_round_trip(name):
    assert is_identifier(name)
    assert parse(Prop(name).text) == Prop(name)
    assert parse(Box(name, Prop(name)).text) == Box(name, Prop(name))


@pytest.mark.parametrize(
    "name",
    ["A", "E", "forall", "exists", "top", "bottom", "E_a", "A_b", "exists_c", "BA_x", "BE_y",
     "nabla_a", "1p", "p-q", ""],
)
def test_reserved_names_are_not_identifiers(name):
    assert not is_identifier(name)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("p &", 1, 4),
        ("p )", 1, 3),
        ("p\n& & q", 2, 3),
    ],
)
def test_syntax_error_position(text, line, column):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.line == line
    assert info.value.column == column


def test_syntax_error_lists_expected_tokens():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("(p & q")
    assert ")" in info.value.expected


def test_syntax_error_names_operators_readably():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("p q")
    assert {"&", "|", "->", "<->"} <= set(info.value.expected)
    with pytest.raises(FormulaSyntaxError) as info:
        parse("E_a")
    expected = set(info.value.expected)
    assert {"~", "[", "A_<主体>", "E_{主体,...}", "nabla_<主体>", "BE_<命题>", "top"} <= expected
    assert not any(t.startswith("__") or t.isupper() and len(t) > 1 for t in expected)


def test_nnf_examples():
    assert to_nnf(Not(Box("a", p))) == Diamond("a", Not(p))
    assert to_nnf(Not(Implies(p, q))) == And(p, Not(q))
    assert to_nnf(Not(SomeRef("a", p))) == AllRef("a", Not(p))
    assert to_nnf(Not(Not(p))) == p


def test_nnf_of_negated_cover():
    negated = to_nnf(Not(Cover("a", (p, q))))
    assert negated == Or(
        Or(Diamond("a", And(Not(p), Not(q))), Box("a", Not(p))), Box("a", Not(q))
    )


def test_nnf_preserves_truth_on_small_models(rng):
    formulas = [random_formula(rng, depth=3, agents=("a",), props=("p",)) for _ in range(25)]
    formulas.append(Not(Cover("a", (p, Not(p)))))
    for pointed in all_models(2):
        for f in formulas:
            assert evaluate(pointed, f) == evaluate(pointed, to_nnf(f))


def test_substitute_respects_binding():
    f = And(p, BisimSome("p", Diamond("a", p)))
    assert substitute(f, "p", q) == And(q, BisimSome("p", Diamond("a", p)))
    assert free_props(f) == {"p"}


def test_fresh_prop_skips_taken_names():
    assert fresh_prop([]) == Prop("_v0")
    assert fresh_prop(["_v0", "_v1", "p"]) == Prop("_v2")


def test_measures():
    f = SomeRef("a", Box("a", Diamond("b", p)))
    assert modal_depth(f) == 2
    assert quantifier_count(AllRef("a", f)) == 2
    assert f.size == 4


def test_conjunction_and_disjunction_units():
    assert conjunction([]) == TOP
    assert disjunction([]) == BOTTOM
    assert conjunction([p, p, q]) == And(p, q)


def test_require_refinement_free():
    require_refinement_free(Box("a", p))
    with pytest.raises(RefinementQuantifierError):
        require_refinement_free(Box("a", SomeRef("b", p)))
