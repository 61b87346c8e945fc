"""
模型检查与精化枚举
"""

import pytest

from rmlkit import gallery
from rmlkit.errors import BudgetExceededError, EnumerationLimitError, RefinementQuantifierError
from rmlkit.generators import random_formula, random_model
from rmlkit.kripke import check_bisimulation, check_refinement
from rmlkit.modelcheck import enumerate_refinements, evaluate, evaluate_rml, extension
from rmlkit.parser import parse
from rmlkit.syntax import BOTTOM, Box, Cover, Not, Prop, SomeRef, expand_covers

p = Prop("p")


def test_chain_depth(chain):
    assert evaluate(chain, parse("<a><a><a>[a]bottom"))
    assert not evaluate(chain, parse("<a><a><a><a>top"))


def test_extension_of_atoms(uncertain):
    model = uncertain.model
    assert extension(model, p) == {"1"}
    assert extension(model, Not(p)) == {"0"}
    assert extension(model, Prop("q")) == set()


def test_knowledge_on_uncertainty_model(uncertain):
    assert not evaluate(uncertain, parse("[a]p"))
    assert evaluate(uncertain, parse("<b>~p & <b>p"))
    learned = gallery.a_learns_p()
    assert evaluate(learned, parse("[a]p & ~[b][a]p"))


def test_cover_semantics_matches_expansion(rng):
    for _ in range(30):
        pointed = random_model(rng, max_states=3, agents=("a",), props=("p", "q"))
        members = tuple(
            random_formula(rng, depth=1, agents=("a",), props=("p", "q")) for _ in range(2)
        )
        cover = Cover("a", members)
        assert extension(pointed.model, cover) == extension(pointed.model, expand_covers(cover))


def test_extension_rejects_quantifiers(uncertain):
    with pytest.raises(RefinementQuantifierError):
        evaluate(uncertain, SomeRef("a", p))


def test_evaluate_rml(uncertain):
    assert evaluate_rml(uncertain, parse("E ([a]p & ~[b][a]p)"))
    assert evaluate_rml(uncertain, parse("E_a [a]bottom"))
    assert not evaluate_rml(uncertain, parse("E_a <a>q"))


def test_evaluate_rml_budget(uncertain):
    with pytest.raises(BudgetExceededError):
        evaluate_rml(uncertain, parse("E_a ([a]p | [b]p)"), max_nodes=2)


def test_enumerate_single_loop():
    loop = gallery.single_loop()
    found = list(enumerate_refinements(loop, "a", depth=1, dup=1))
    assert len(found) == 3
    assert check_bisimulation(loop, found[0]).holds
    for candidate in found:
        assert check_refinement(loop, candidate, {"a"}).holds
    for i, first in enumerate(found):
        for second in found[i + 1 :]:
            assert not check_bisimulation(first, second).holds


def test_enumerate_respects_limit():
    loop = gallery.single_loop()
    assert len(list(enumerate_refinements(loop, "a", depth=1, dup=1, limit=2))) == 2


def test_enumerate_finds_refinement_satisfying_formula(uncertain):
    goal = parse("[a]p & ~[b][a]p")
    candidates = enumerate_refinements(uncertain, "a", depth=0, dup=1)
    assert any(evaluate(c, goal) for c in candidates)


def test_enumerate_agrees_with_reduction_when_found(rng):
    # 枚举找到满足 ψ 的精化时，∃_a ψ 必然成立
    for _ in range(15):
        pointed = random_model(rng, max_states=2, agents=("a",), props=("p",))
        psi = random_formula(rng, depth=2, agents=("a",), props=("p",))
        found = any(
            evaluate(c, psi) for c in enumerate_refinements(pointed, "a", depth=1, dup=1, limit=40)
        )
        if found:
            assert evaluate_rml(pointed, SomeRef("a", psi))


def test_enumerate_rejects_bad_bounds(uncertain):
    with pytest.raises(ValueError):
        list(enumerate_refinements(uncertain, "a", depth=-1, dup=1))
    with pytest.raises(ValueError):
        list(enumerate_refinements(uncertain, "a", depth=0, dup=0))


def test_enumerate_limit_on_prunable_arrows(uncertain):
    with pytest.raises(EnumerationLimitError):
        list(enumerate_refinements(uncertain, "a", depth=2, dup=3))


def test_single_loop_is_serial():
    loop = gallery.single_loop()
    assert evaluate(loop, parse("[a]<a>top"))
    assert not evaluate(loop, Box("a", BOTTOM))
