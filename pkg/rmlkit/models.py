"""
Kripke 模型与动作模型数据结构
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .syntax import Formula

_EMPTY: frozenset = frozenset()


def _freeze_relations(
    relations: Mapping[str, Iterable[Iterable[str]]],
) -> dict[str, frozenset[tuple[str, str]]]:
    return {
        agent: frozenset((str(a), str(b)) for a, b in pairs)
        for agent, pairs in sorted(relations.items())
    }


def _successor_index(
    relations: Mapping[str, frozenset[tuple[str, str]]],
) -> dict[str, dict[str, frozenset[str]]]:
    index: dict[str, dict[str, frozenset[str]]] = {}
    for agent, pairs in relations.items():
        succ: dict[str, set[str]] = {}
        for a, b in pairs:
            succ.setdefault(a, set()).add(b)
        index[agent] = {s: frozenset(ts) for s, ts in succ.items()}
    return index


@dataclass(frozen=True)
class Model:
    """
    有限多主体 Kripke 模型 (S, R, V)

    relations 的键即主体集合，valuation 的键即命题集合（允许空集）。
    """

    states: frozenset[str]
    relations: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)
    valuation: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(str(s) for s in self.states))
        object.__setattr__(self, "relations", _freeze_relations(self.relations))
        object.__setattr__(
            self,
            "valuation",
            {
                p: frozenset(str(s) for s in members)
                for p, members in sorted(self.valuation.items())
            },
        )

    @cached_property
    def agents(self) -> tuple[str, ...]:
        return tuple(sorted(self.relations))

    @cached_property
    def props(self) -> tuple[str, ...]:
        return tuple(sorted(self.valuation))

    @cached_property
    def sorted_states(self) -> tuple[str, ...]:
        return tuple(sorted(self.states))

    @cached_property
    def _succ(self) -> dict[str, dict[str, frozenset[str]]]:
        return _successor_index(self.relations)

    @cached_property
    def _labels(self) -> dict[str, frozenset[str]]:
        labels: dict[str, set[str]] = {s: set() for s in self.states}
        for p, members in self.valuation.items():
            for s in members:
                labels.setdefault(s, set()).add(p)
        return {s: frozenset(ps) for s, ps in labels.items()}

    def successors(self, agent: str, state: str) -> frozenset[str]:
        """agent 下 state 的后继；未知主体视为空关系"""
        return self._succ.get(agent, {}).get(state, _EMPTY)

    def labels(self, state: str) -> frozenset[str]:
        """state 上为真的命题"""
        return self._labels.get(state, _EMPTY)

    def holds(self, prop: str, state: str) -> bool:
        return state in self.valuation.get(prop, _EMPTY)


@dataclass(frozen=True)
class PointedModel:
    """带指定点的模型 M_s"""

    model: Model
    point: str

    def __post_init__(self):
        object.__setattr__(self, "point", str(self.point))


@dataclass(frozen=True)
class StateRelation:
    """两个模型之间的状态关系"""

    left: Model
    right: Model
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(
            self, "pairs", frozenset((str(a), str(b)) for a, b in self.pairs)
        )

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class RefinementCheck:
    """精化 / 互模拟检查结果"""

    holds: bool
    witness: StateRelation | None = None  # holds 时给出见证关系
    distinguisher: "Formula | None" = None  # 不成立时：右侧为真、左侧为假的公式


@dataclass(frozen=True)
class ActionModel:
    """动作模型 (S, R, pre)"""

    points: frozenset[str]
    relations: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)
    pre: dict[str, "Formula"] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(str(s) for s in self.points))
        object.__setattr__(self, "relations", _freeze_relations(self.relations))
        object.__setattr__(self, "pre", dict(sorted(self.pre.items())))

    @cached_property
    def agents(self) -> tuple[str, ...]:
        return tuple(sorted(self.relations))

    @cached_property
    def _succ(self) -> dict[str, dict[str, frozenset[str]]]:
        return _successor_index(self.relations)

    def successors(self, agent: str, point: str) -> frozenset[str]:
        return self._succ.get(agent, {}).get(point, _EMPTY)


@dataclass(frozen=True)
class PointedActionModel:
    """带指定点的动作模型（认知动作）"""

    action: ActionModel
    point: str
