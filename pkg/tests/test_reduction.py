"""
精化量词归约与见证构造
"""

import pytest

from rmlkit import gallery
from rmlkit.config import DEFAULT_MAX_NODES, MAX_NODES_ENV, resolve_max_nodes
from rmlkit.errors import RefinementQuantifierError
from rmlkit.generators import enumerate_formulas, random_formula, random_model
from rmlkit.kripke import check_refinement, contract, generated_submodel
from rmlkit.modelcheck import enumerate_refinements, evaluate, evaluate_rml
from rmlkit.parser import parse
from rmlkit.reduction import (
    RULES,
    eliminate_innermost,
    reduce,
    synthesize_group_witness,
    synthesize_witness,
)
from rmlkit.syntax import TOP, AllRef, Diamond, Not, Prop, SomeRef


@pytest.mark.parametrize(
    "text, expected",
    [
        ("A_a p", Prop("p")),
        ("E_a <a>p", Diamond("a", Prop("p"))),
        ("E_a [a]p", TOP),
        ("E_a E_b r", Prop("r")),
        ("E_a [a]bottom", TOP),
        ("A_a <a>top", parse("bottom")),
    ],
)
def test_reduce_examples(text, expected):
    result, _ = reduce(parse(text))
    assert result == expected


def test_reduce_leaves_quantifier_free_input_alone():
    f = parse("[a]p -> <b>q")
    result, trace = reduce(f)
    assert result is f
    assert len(trace) == 0


@pytest.mark.parametrize(
    "text, rules",
    [
        ("E_a [a]p", {"DNF", "OrSplit", "RK", "RProp"}),
        ("E_a (p & <a>q)", {"PropFactor", "RK", "RProp"}),
        ("E_a (<a>p & <b>q)", {"RKconj", "RK", "RKmulti", "RProp"}),
    ],
)
def test_trace_rules(text, rules):
    _, trace = reduce(parse(text))
    used = {step.rule for step in trace.steps}
    assert rules <= used
    assert used <= set(RULES)


def test_trace_steps_are_equivalences(uncertain, chain, right):
    models = [uncertain, chain, right, gallery.a_learns_p()]
    _, trace = reduce(parse("E_a (p & <a>q) | E_b ([a]p & <b>~p)"))
    assert len(trace) > 0
    for step in trace.steps:
        for pointed in models:
            assert evaluate_rml(pointed, step.before) == evaluate_rml(pointed, step.after)


def test_reduce_output_is_quantifier_free(rng):
    for _ in range(30):
        f = random_formula(rng, depth=3, quantifiers=True)
        result, _ = reduce(f)
        assert result.refinement_free


def test_eliminate_innermost():
    assert eliminate_innermost(SomeRef("a", parse("<a>p"))) == parse("<a>p")
    with pytest.raises(RefinementQuantifierError):
        eliminate_innermost(parse("<a>p"))
    with pytest.raises(RefinementQuantifierError):
        eliminate_innermost(parse("E_a E_b p"))


def test_witness_for_knowledge(uncertain):
    psi = parse("[a]p")
    witness = synthesize_witness(uncertain, "a", psi)
    assert witness is not None
    assert check_refinement(uncertain, witness, {"a"}).holds
    assert evaluate(witness, psi)


def test_no_witness_when_quantifier_is_false(uncertain):
    assert synthesize_witness(uncertain, "a", parse("<a>q")) is None


def test_witness_rejects_quantified_goal(uncertain):
    with pytest.raises(RefinementQuantifierError):
        synthesize_witness(uncertain, "a", parse("E_b p"))


def test_group_witness(uncertain):
    psi = parse("[a]p & ~[b][a]p")
    witness = synthesize_group_witness(uncertain, ["a", "b"], psi)
    assert witness is not None
    assert check_refinement(uncertain, witness, {"a", "b"}).holds
    assert evaluate(witness, psi)


@pytest.mark.slow
def test_witness_agrees_with_reduction(rng):
    for _ in range(200):
        props = ("p",) if rng.random() < 0.5 else ("p", "q")
        pointed = random_model(rng, max_states=4, agents=("a", "b"), props=props)
        agent = rng.choice(("a", "b"))
        psi = random_formula(rng, depth=2, agents=("a", "b"), props=props)
        reduced, _ = reduce(SomeRef(agent, psi))
        holds = evaluate(pointed, reduced)
        witness = synthesize_witness(pointed, agent, psi)
        if not holds:
            assert witness is None, psi.text
            continue
        assert witness is not None, psi.text
        assert check_refinement(pointed, witness, {agent}).holds
        assert evaluate(witness, psi)


# 1 个命题、1 个主体上的量词体，加上量词后不超过 7 个结点
QUANTIFIER_BODIES = [f for f in enumerate_formulas(1, ("a",), ("p",)) if f.size <= 6]


@pytest.mark.slow
def test_reduction_agrees_with_refinements_on_small_models(small_models):
    reduced = {
        psi: (reduce(SomeRef("a", psi))[0], reduce(AllRef("a", psi))[0])
        for psi in QUANTIFIER_BODIES
    }
    for pointed in small_models:
        depth = 1 if len(pointed.model.states) < 3 else 0
        refinements = list(enumerate_refinements(pointed, "a", depth=depth, dup=1))
        for psi, (some, every) in reduced.items():
            exists = evaluate(pointed, some)
            # 枚举到满足 ψ 的精化，则 ∃_a ψ 成立
            if any(evaluate(n, psi) for n in refinements):
                assert exists, psi.text
            # ∃_a ψ 成立，则能构造出见证
            if exists:
                witness = synthesize_witness(pointed, "a", psi)
                assert witness is not None, psi.text
                assert evaluate(witness, psi)
                assert check_refinement(pointed, witness, {"a"}).holds
            if evaluate(pointed, every):
                assert all(evaluate(n, psi) for n in refinements), psi.text
            assert evaluate(pointed, every) == (
                not evaluate(pointed, reduce(SomeRef("a", Not(psi)))[0])
            )


def test_reduction_is_bisimulation_invariant(rng):
    for _ in range(30):
        pointed = random_model(rng)
        f = random_formula(rng, depth=2, quantifiers=True)
        reduced, _ = reduce(f)
        value = evaluate(pointed, reduced)
        assert evaluate(contract(pointed), reduced) == value
        assert evaluate(generated_submodel(pointed), reduced) == value


@pytest.mark.parametrize(
    "explicit, env, expected",
    [
        (5, "7", 5),
        (None, "7", 7),
        (None, None, DEFAULT_MAX_NODES),
        (None, "abc", DEFAULT_MAX_NODES),
        (None, "-3", DEFAULT_MAX_NODES),
    ],
)
def test_resolve_max_nodes(monkeypatch, explicit, env, expected):
    if env is None:
        monkeypatch.delenv(MAX_NODES_ENV, raising=False)
    else:
        monkeypatch.setenv(MAX_NODES_ENV, env)
    assert resolve_max_nodes(explicit) == expected
