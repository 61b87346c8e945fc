"""
可满足性与有效性判定
多主体 K 的标记表列法；L_∀ 公式先归约再判定
"""

from collections import deque
from dataclasses import dataclass

from .kripke import contract
from .log import logger
from .models import Model, PointedModel
from .normal_forms import simplify
from .reduction import reduce
from .syntax import (
    And,
    Bottom,
    Box,
    Diamond,
    Formula,
    Iff,
    Not,
    Or,
    Prop,
    Top,
    all_props,
    expand_covers,
    require_refinement_free,
    to_nnf,
)

SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"


@dataclass(frozen=True)
class Verdict:
    """可满足性判定结果；可满足时附带模型"""

    status: str
    model: PointedModel | None = None

    @property
    def satisfiable(self) -> bool:
        return self.status == SATISFIABLE


@dataclass(frozen=True)
class ValidityResult:
    """有效性判定结果；无效时附带反模型"""

    valid: bool
    countermodel: PointedModel | None = None


class _Node:
    """开放表列分支上的一个世界"""

    __slots__ = ("true_props", "children")

    def __init__(self, true_props: frozenset[str], children: list[tuple[str, "_Node"]]):
        self.true_props = true_props
        self.children = children


class _Tableau:
    """
    K_n 表列

    先饱和命题规则（析取按公式顺序深度优先分支），
    再为每个 ◇_a ψ 生成一个后继：{ψ} ∪ {所有 □_a 的体}。
    K 无需回路检测，后继的模态深度严格下降。
    """

    def __init__(self):
        self.memo: dict[frozenset[Formula], _Node | None] = {}
        self.explored = 0

    def solve(self, gamma: frozenset[Formula]) -> _Node | None:
        if gamma in self.memo:
            return self.memo[gamma]
        self.explored += 1
        result = None
        start = sorted(gamma, key=lambda f: f.text, reverse=True)
        stack = [(start, frozenset(), frozenset(), frozenset())]
        while stack and result is None:
            todo, pos, neg, modal = stack.pop()
            todo = list(todo)
            closed = False
            while todo and not closed:
                f = todo.pop()
                if isinstance(f, Prop):
                    closed = f.name in neg
                    pos = pos | {f.name}
                elif isinstance(f, Not):
                    closed = f.sub.name in pos
                    neg = neg | {f.sub.name}
                elif isinstance(f, Top):
                    continue
                elif isinstance(f, Bottom):
                    closed = True
                elif isinstance(f, And):
                    todo.extend((f.right, f.left))
                elif isinstance(f, Or):
                    stack.append((todo + [f.right], pos, neg, modal))
                    todo.append(f.left)
                else:
                    modal = modal | {f}
            if not closed:
                result = self._expand(pos, modal)
        self.memo[gamma] = result
        return result

    def _expand(self, pos: frozenset[str], modal: frozenset[Formula]) -> _Node | None:
        boxes: dict[str, set[Formula]] = {}
        diamonds: list[Diamond] = []
        for f in modal:
            if isinstance(f, Box):
                boxes.setdefault(f.agent, set()).add(f.sub)
            else:
                diamonds.append(f)
        children = []
        for d in sorted(diamonds, key=lambda f: f.text):
            child = self.solve(frozenset({d.sub} | boxes.get(d.agent, set())))
            if child is None:
                return None
            children.append((d.agent, child))
        return _Node(pos, children)


def _extract(root: _Node, props: frozenset[str]) -> PointedModel:
    ids: dict[int, str] = {id(root): "w0"}
    nodes = {"w0": root}
    relations: dict[str, set[tuple[str, str]]] = {}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for agent, child in node.children:
            if id(child) not in ids:
                name = f"w{len(ids)}"
                ids[id(child)] = name
                nodes[name] = child
                queue.append(child)
            relations.setdefault(agent, set()).add((ids[id(node)], ids[id(child)]))
    valuation = {p: {n for n, node in nodes.items() if p in node.true_props} for p in props}
    model = Model(frozenset(nodes), relations, valuation)
    return contract(PointedModel(model, "w0"))


def k_satisfiable(formula: Formula) -> Verdict:
    """
    多主体 K 上的可满足性

    Args:
        formula: 不含精化量词的公式

    Returns:
        Verdict；可满足时模型已做互模拟收缩
    """
    require_refinement_free(formula)
    prepared = to_nnf(expand_covers(simplify(formula)))
    tableau = _Tableau()
    root = tableau.solve(frozenset({prepared}))
    logger.debug(f"表列展开 {tableau.explored} 个公式集")
    if root is None:
        return Verdict(UNSATISFIABLE)
    return Verdict(SATISFIABLE, _extract(root, all_props(formula)))


def rml_satisfiable(formula: Formula, max_nodes: int | None = None) -> Verdict:
    """L_∀ 可满足性：k_satisfiable(reduce(φ))"""
    reduced, _ = reduce(formula, max_nodes=max_nodes)
    verdict = k_satisfiable(reduced)
    if verdict.model is not None:
        # 补全原公式中出现但归约后消失的命题
        model = verdict.model.model
        missing = all_props(formula) - set(model.props)
        if missing:
            valuation = dict(model.valuation)
            valuation.update({p: frozenset() for p in missing})
            verdict = Verdict(
                verdict.status,
                PointedModel(Model(model.states, model.relations, valuation), verdict.model.point),
            )
    return verdict


def rml_valid(formula: Formula, max_nodes: int | None = None) -> ValidityResult:
    """
    L_∀ 有效性：reduce(¬φ) 在 K 上不可满足

    Raises:
        BudgetExceededError: 归约超出结点预算
    """
    verdict = rml_satisfiable(Not(formula), max_nodes=max_nodes)
    if verdict.satisfiable:
        return ValidityResult(False, verdict.model)
    return ValidityResult(True)


def rml_equivalent(
    left: Formula, right: Formula, max_nodes: int | None = None
) -> ValidityResult:
    """rml_valid(φ ↔ ψ)"""
    return rml_valid(Iff(left, right), max_nodes=max_nodes)
