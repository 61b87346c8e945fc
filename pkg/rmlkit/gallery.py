"""
示例模型库
常用的小型示例，按内容命名；聊天命令和测试都直接从这里取模型
"""

from collections.abc import Callable

from .models import ActionModel, Model, PointedActionModel, PointedModel
from .syntax import TOP, Prop


def _total(states: list[str]) -> set[tuple[str, str]]:
    return {(s, t) for s in states for t in states}


def chain(length: int = 4) -> PointedModel:
    """a-链 c0 → c1 → ... ，指定点 c0"""
    states = [f"c{i}" for i in range(length)]
    arrows = {(states[i], states[i + 1]) for i in range(length - 1)}
    return PointedModel(Model(frozenset(states), {"a": arrows}), "c0")


def two_sided_chain() -> PointedModel:
    """从 x0 出发的两条长度为 3 的 a-链，与 4-链互模拟"""
    arrows = {
        ("x0", "x1"), ("x1", "x2"), ("x2", "x3"),
        ("x0", "y1"), ("y1", "y2"), ("y2", "y3"),
    }
    states = {s for pair in arrows for s in pair}
    return PointedModel(Model(frozenset(states), {"a": arrows}), "x0")


def backward_fork() -> PointedModel:
    """
    分叉前移后的链：f3 → f2（死点），f3 → f4 → f5

    是 4-链的 a-精化，反之不成立
    """
    arrows = {("f3", "f2"), ("f3", "f4"), ("f4", "f5")}
    return PointedModel(Model(frozenset({"f2", "f3", "f4", "f5"}), {"a": arrows}), "f3")


def refinement_left() -> PointedModel:
    """三状态 a-链 1 → 2 → 3，指定点 1"""
    arrows = {("1", "2"), ("2", "3")}
    return PointedModel(Model(frozenset({"1", "2", "3"}), {"a": arrows}), "1")


def refinement_right() -> PointedModel:
    """
    4 → 5 → 6 与 4 → 7，指定点 4

    与 refinement_left 互为 a-精化但不互模拟
    """
    arrows = {("4", "5"), ("5", "6"), ("4", "7")}
    return PointedModel(Model(frozenset({"4", "5", "6", "7"}), {"a": arrows}), "4")


def p_uncertainty() -> PointedModel:
    """两个主体都不知道 p：状态 0（¬p）与 1（p），a、b 均为全关系，指定点 1"""
    states = ["0", "1"]
    return PointedModel(
        Model(frozenset(states), {"a": _total(states), "b": _total(states)}, {"p": {"1"}}),
        "1",
    )


def a_learns_p() -> PointedModel:
    """
    a 得知 p 而 b 不知道 a 已得知：p_uncertainty 的 {a,b}-精化

    状态 2 是 1 的副本，a 在 2 只看到自己，b 仍是全关系
    """
    states = ["0", "1", "2"]
    a = {("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("2", "2")}
    return PointedModel(
        Model(frozenset(states), {"a": a, "b": _total(states)}, {"p": {"1", "2"}}),
        "2",
    )


def a_learns_p_action() -> PointedActionModel:
    """两个动作点 t（前提 ⊤）与 p（前提 p），a 能区分而 b 不能；实际发生的是 p"""
    points = ["t", "p"]
    action = ActionModel(
        frozenset(points),
        {"a": {("t", "t"), ("p", "p")}, "b": _total(points)},
        {"t": TOP, "p": Prop("p")},
    )
    return PointedActionModel(action, "p")


def single_loop(agent: str = "a") -> PointedModel:
    """单状态自环"""
    return PointedModel(Model(frozenset({"s"}), {agent: {("s", "s")}}), "s")


GALLERY: dict[str, Callable[[], PointedModel]] = {
    "chain": chain,
    "two_sided_chain": two_sided_chain,
    "backward_fork": backward_fork,
    "refinement_left": refinement_left,
    "refinement_right": refinement_right,
    "p_uncertainty": p_uncertainty,
    "a_learns_p": a_learns_p,
    "single_loop": single_loop,
}
