"""
互模拟量化翻译
把精化量词翻译为互模拟量词加上按主体的相对化
"""

from itertools import count

from .errors import RefinementQuantifierError, RelativizationPreconditionError
from .syntax import (
    AllRef,
    And,
    BisimAll,
    BisimSome,
    Box,
    Diamond,
    Formula,
    Implies,
    Prop,
    SomeRef,
    all_props,
    bound_vars,
    expand_covers,
    fresh_prop,
    substitute,
)


def relativize(formula: Formula, agent: str, prop: str) -> Formula:
    """
    φ^(a,p)：只删除 a-箭头的相对化

    □_a φ 变为 □_a(p → φ^(a,p))，◇_a φ 变为 ◇_a(p ∧ φ^(a,p))，
    其他主体的模态与命题变量不变；覆盖算子先展开。
    约束 p 的互模拟量词把约束变量换成新名字后再向内相对化。

    Raises:
        RefinementQuantifierError: 公式含精化量词
    """
    if not formula.refinement_free:
        raise RefinementQuantifierError(f"相对化的对象不能包含精化量词: {formula.text}")
    return _relativize(expand_covers(formula), agent, prop)


def _relativize(f: Formula, agent: str, prop: str) -> Formula:
    if not f.children():
        return f
    if isinstance(f, Box) and f.agent == agent:
        return Box(agent, Implies(Prop(prop), _relativize(f.sub, agent, prop)))
    if isinstance(f, Diamond) and f.agent == agent:
        return Diamond(agent, And(Prop(prop), _relativize(f.sub, agent, prop)))
    if isinstance(f, (BisimAll, BisimSome)) and f.var == prop:
        renamed = fresh_prop(all_props(f.sub) | {prop})
        body = substitute(f.sub, prop, renamed)
        return type(f)(renamed.name, _relativize(body, agent, prop))
    return f.map_children(lambda c: _relativize(c, agent, prop))


def translate(formula: Formula) -> Formula:
    """
    t(φ)：精化量化公式到互模拟量化公式

    t(∀_a φ) = ∀̃p t(φ)^(a,p)，t(∃_a φ) = ∃̃p t(φ)^(a,p)，
    p 取不在 φ 中出现的第一个新变量；其余构造子逐项翻译。
    """
    if isinstance(formula, (AllRef, SomeRef)):
        var = fresh_prop(all_props(formula.sub))
        body = relativize(translate(formula.sub), formula.agent, var.name)
        ctor = BisimAll if isinstance(formula, AllRef) else BisimSome
        return ctor(var.name, body)
    if not formula.children():
        return formula
    return formula.map_children(translate)


def alpha_normalize(formula: Formula) -> Formula:
    """按先序位置把约束变量依次改名为 #0, #1, ...，便于比较 α-等价"""
    return _alpha(formula, {}, count())


def _alpha(f: Formula, env: dict[str, str], counter) -> Formula:
    if isinstance(f, Prop):
        return Prop(env[f.name]) if f.name in env else f
    if isinstance(f, (BisimAll, BisimSome)):
        name = f"#{next(counter)}"
        return type(f)(name, _alpha(f.sub, {**env, f.var: name}, counter))
    if not f.children():
        return f
    return f.map_children(lambda c: _alpha(c, env, counter))


def check_relativization_commutes(
    formula: Formula, agent_a: str, prop_p: str, agent_b: str, prop_q: str
) -> bool:
    """
    (φ^(a,p))^(b,q) 与 (φ^(b,q))^(a,p) 在 α-等价意义下是否相同

    Raises:
        RelativizationPreconditionError: a = b、p = q，或 p/q 是 φ 的约束变量
    """
    if agent_a == agent_b:
        raise RelativizationPreconditionError(f"两个主体必须不同: {agent_a}")
    if prop_p == prop_q:
        raise RelativizationPreconditionError(f"两个相对化变量必须不同: {prop_p}")
    clash = {prop_p, prop_q} & bound_vars(formula)
    if clash:
        raise RelativizationPreconditionError(
            f"相对化变量与约束变量冲突: {', '.join(sorted(clash))}"
        )
    first = relativize(relativize(formula, agent_a, prop_p), agent_b, prop_q)
    second = relativize(relativize(formula, agent_b, prop_q), agent_a, prop_p)
    return alpha_normalize(first) == alpha_normalize(second)
