"""
随机与穷举生成器
性质测试用的随机模型、随机公式、小模型穷举以及 a-正公式的有界枚举；
随机生成一律接收调用方传入的 random.Random，便于复现
"""

import random
from collections.abc import Iterator, Sequence
from itertools import combinations, product

from .models import Model, PointedModel
from .syntax import (
    BOTTOM,
    TOP,
    AllRef,
    And,
    Bottom,
    Box,
    Diamond,
    Formula,
    Not,
    Or,
    Prop,
    SomeRef,
    Top,
)

# ============================================================
# 模型
# ============================================================


def random_model(
    rng: random.Random,
    max_states: int = 4,
    agents: Sequence[str] = ("a", "b"),
    props: Sequence[str] = ("p", "q"),
    density: float = 0.35,
) -> PointedModel:
    """状态数在 1..max_states 之间随机；每条可能的箭头以 density 概率出现"""
    n = rng.randint(1, max_states)
    states = [str(i) for i in range(n)]
    relations = {
        agent: {(s, t) for s in states for t in states if rng.random() < density}
        for agent in agents
    }
    valuation = {p: {s for s in states if rng.random() < 0.5} for p in props}
    return PointedModel(Model(frozenset(states), relations, valuation), rng.choice(states))


def all_models(
    n_states: int, agents: Sequence[str] = ("a",), props: Sequence[str] = ("p",)
) -> Iterator[PointedModel]:
    """穷举给定规模的全部点模型（指定点固定为 "0"）"""
    states = [str(i) for i in range(n_states)]
    arrows = [(s, t) for s in states for t in states]
    relation_choices = [
        frozenset(a for i, a in enumerate(arrows) if mask >> i & 1)
        for mask in range(1 << len(arrows))
    ]
    valuation_choices = [
        frozenset(s for i, s in enumerate(states) if mask >> i & 1)
        for mask in range(1 << n_states)
    ]
    for rels in product(relation_choices, repeat=len(agents)):
        for vals in product(valuation_choices, repeat=len(props)):
            model = Model(
                frozenset(states), dict(zip(agents, rels)), dict(zip(props, vals))
            )
            yield PointedModel(model, "0")


# ============================================================
# 公式
# ============================================================


def random_formula(
    rng: random.Random,
    depth: int = 2,
    agents: Sequence[str] = ("a", "b"),
    props: Sequence[str] = ("p", "q"),
    quantifiers: bool = False,
) -> Formula:
    """深度不超过 depth 的随机公式；quantifiers 为真时也生成精化量词"""
    if depth <= 0 or rng.random() < 0.25:
        choice = rng.randrange(len(props) + 2)
        if choice < len(props):
            return Prop(props[choice])
        return TOP if choice == len(props) else BOTTOM
    kinds = ["not", "and", "or", "box", "dia"]
    if quantifiers:
        kinds += ["all", "some"]
    kind = rng.choice(kinds)

    def sub() -> Formula:
        return random_formula(rng, depth - 1, agents, props, quantifiers)

    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    ctor = {"box": Box, "dia": Diamond, "all": AllRef, "some": SomeRef}[kind]
    return ctor(rng.choice(agents), sub())


def _literals(props: Sequence[str]) -> list[Formula]:
    out: list[Formula] = []
    for p in props:
        out += [Prop(p), Not(Prop(p))]
    return out


def enumerate_formulas(
    depth: int, agents: Sequence[str] = ("a",), props: Sequence[str] = ("p",)
) -> list[Formula]:
    """
    有界枚举不含精化量词的公式

    第 0 层为文字与常量；每加一层，对上一层加 ¬ / □ / ◇，并取第 0 层两两的 ∧ / ∨
    """
    base = _literals(props) + [TOP, BOTTOM]
    level = list(base)
    seen = set(level)
    for _ in range(depth):
        nxt = []
        for f in level:
            nxt.append(Not(f))
            for agent in agents:
                nxt += [Box(agent, f), Diamond(agent, f)]
        for f, g in combinations(base, 2):
            nxt += [And(f, g), Or(f, g)]
        level = [f for f in nxt if f not in seen]
        seen.update(level)
    return sorted(seen, key=lambda f: (f.size, f.text))


# ============================================================
# a-正公式
# ============================================================


def is_positive(formula: Formula, agent: str) -> bool:
    """
    是否属于 a-正片段

    否定只作用在命题上，可以用 ∧ / ∨、任意 ◇，以及其他主体的 □；
    常量 ⊤ / ⊥ 视为 p∨¬p 与 p∧¬p 的简写。
    """
    if isinstance(formula, (Prop, Top, Bottom)):
        return True
    if isinstance(formula, Not):
        return isinstance(formula.sub, Prop)
    if isinstance(formula, (And, Or)):
        return is_positive(formula.left, agent) and is_positive(formula.right, agent)
    if isinstance(formula, Diamond):
        return is_positive(formula.sub, agent)
    if isinstance(formula, Box):
        return formula.agent != agent and is_positive(formula.sub, agent)
    return False


def positive_formulas(
    agents: Sequence[str], props: Sequence[str], agent: str, depth: int
) -> list[Formula]:
    """深度不超过 depth 的 a-正公式（有界枚举，用于保持性抽查）"""
    base = _literals(props) + [TOP]
    level = list(base)
    seen = set(level)
    for _ in range(depth):
        nxt = []
        for f in level:
            for b in agents:
                nxt.append(Diamond(b, f))
                if b != agent:
                    nxt.append(Box(b, f))
        for f, g in combinations(level, 2):
            nxt += [And(f, g), Or(f, g)]
        level = [f for f in nxt if f not in seen]
        seen.update(level)
    return sorted(seen, key=lambda f: (f.size, f.text))
