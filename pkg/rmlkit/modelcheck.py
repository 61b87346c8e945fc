"""
模型检查
自底向上标记求公式外延；含精化量词的公式先归约再检查；
有界的"展开-复制-剪枝"精化枚举作为独立的测试预言
"""

from collections.abc import Iterator

from .config import MAX_PRUNABLE_ARROWS
from .errors import EnumerationLimitError, RefinementQuantifierError
from .kripke import check_bisimulation, generated_submodel
from .log import logger
from .models import Model, PointedModel
from .syntax import (
    AllRef,
    And,
    BisimAll,
    BisimSome,
    Bottom,
    Box,
    Cover,
    Diamond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    SomeRef,
    Top,
)


def extension(model: Model, formula: Formula) -> frozenset[str]:
    """
    公式在模型中为真的状态集合

    每个不同的子公式只计算一次；使用显式栈，深层公式不受递归深度限制。
    覆盖算子按定义的两个合取支直接计算。
    """
    memo: dict[Formula, frozenset[str]] = {}
    states = model.states
    stack: list[tuple[Formula, bool]] = [(formula, False)]
    while stack:
        f, ready = stack.pop()
        if f in memo:
            continue
        if not ready:
            if isinstance(f, (AllRef, SomeRef, BisimAll, BisimSome)):
                raise RefinementQuantifierError(f"模型检查前需先消去量词: {f.text}")
            stack.append((f, True))
            stack.extend((c, False) for c in f.children() if c not in memo)
            continue
        memo[f] = _label(model, states, f, memo)
    return memo[formula]


def _label(
    model: Model, states: frozenset[str], f: Formula, memo: dict[Formula, frozenset[str]]
) -> frozenset[str]:
    if isinstance(f, Prop):
        return model.valuation.get(f.name, frozenset())
    if isinstance(f, Top):
        return states
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Not):
        return states - memo[f.sub]
    if isinstance(f, And):
        return memo[f.left] & memo[f.right]
    if isinstance(f, Or):
        return memo[f.left] | memo[f.right]
    if isinstance(f, Implies):
        return (states - memo[f.left]) | memo[f.right]
    if isinstance(f, Iff):
        left, right = memo[f.left], memo[f.right]
        return frozenset(s for s in states if (s in left) == (s in right))
    if isinstance(f, Box):
        body = memo[f.sub]
        return frozenset(s for s in states if model.successors(f.agent, s) <= body)
    if isinstance(f, Diamond):
        body = memo[f.sub]
        return frozenset(s for s in states if model.successors(f.agent, s) & body)
    if isinstance(f, Cover):
        members = [memo[m] for m in f.members]
        union = frozenset().union(*members)
        out = set()
        for s in states:
            succ = model.successors(f.agent, s)
            if succ <= union and all(succ & m for m in members):
                out.add(s)
        return frozenset(out)
    raise TypeError(f"未知公式结点: {type(f).__name__}")


def evaluate(pointed: PointedModel, formula: Formula) -> bool:
    """M_s ⊨ φ，φ 不含精化量词"""
    return pointed.point in extension(pointed.model, formula)


def evaluate_rml(
    pointed: PointedModel, formula: Formula, max_nodes: int | None = None
) -> bool:
    """
    含精化量词公式的模型检查：evaluate(M_s, reduce(φ))

    Raises:
        BudgetExceededError: 归约超出结点预算
    """
    if formula.refinement_free:
        return evaluate(pointed, formula)
    from .reduction import reduce

    reduced, _ = reduce(formula, max_nodes=max_nodes)
    return evaluate(pointed, reduced)


# ============================================================
# 精化枚举
# ============================================================


def _unravel(
    pointed: PointedModel, agent: str, depth: int, dup: int
) -> tuple[dict[str, str], dict[str, set[tuple[str, str]]], list[tuple[str, str]]]:
    """
    把指定点展开 depth+1 层新结点，每个后继复制 dup 份；
    最后一层新结点直接指回原模型的状态副本。

    Returns:
        (新结点 -> 来源状态, 各主体的固定箭头, 可剪枝的 agent 箭头列表)
    """
    model = pointed.model
    origin: dict[str, str] = {}
    fixed: dict[str, set[tuple[str, str]]] = {a: set() for a in model.agents}
    fixed.setdefault(agent, set())
    prunable: list[tuple[str, str]] = []

    root = "u0"
    origin[root] = pointed.point
    frontier = [root]
    for level in range(depth + 1):
        next_frontier = []
        for node in frontier:
            for c in model.agents:
                for t in sorted(model.successors(c, origin[node])):
                    if level < depth:
                        children = []
                        for _ in range(dup):
                            child = f"u{len(origin)}"
                            origin[child] = t
                            children.append(child)
                        next_frontier.extend(children)
                    else:
                        children = [f"m:{t}"]
                    for child in children:
                        if c == agent:
                            prunable.append((node, child))
                        else:
                            fixed[c].add((node, child))
        frontier = next_frontier
    return origin, fixed, prunable


def enumerate_refinements(
    pointed: PointedModel,
    agent: str,
    depth: int,
    dup: int,
    limit: int | None = None,
) -> Iterator[PointedModel]:
    """
    有界枚举 M_s 的 a-精化（单向预言：可靠但不保证完备）

    先把指定点展开 depth 层并把每个后继复制 dup 份，
    再枚举新结点上 agent 箭头的子集；保留全部箭头的子集最先产出，它与 M_s 互模拟。
    产出的模型两两不互模拟。

    Args:
        pointed: 原点模型
        agent: 被精化的主体
        depth: 展开深度（>= 0）
        dup: 每个后继的副本数（>= 1）
        limit: 最多产出的模型数，None 表示不限

    Raises:
        EnumerationLimitError: 可剪枝箭头超过 MAX_PRUNABLE_ARROWS
    """
    if depth < 0 or dup < 1:
        raise ValueError("depth 必须 >= 0，dup 必须 >= 1")
    model = pointed.model
    origin, fixed, prunable = _unravel(pointed, agent, depth, dup)
    if len(prunable) > MAX_PRUNABLE_ARROWS:
        raise EnumerationLimitError(
            f"可剪枝箭头 {len(prunable)} 条，超过上限 {MAX_PRUNABLE_ARROWS}"
        )
    logger.debug(f"精化枚举: {len(origin)} 个展开结点，{len(prunable)} 条可剪枝箭头")

    states = set(origin) | {f"m:{s}" for s in model.states}
    base_relations: dict[str, set[tuple[str, str]]] = {}
    for c in set(model.agents) | {agent}:
        base = {(f"m:{a}", f"m:{b}") for a, b in model.relations.get(c, ())}
        base_relations[c] = base | fixed.get(c, set())
    valuation = {
        p: {f"m:{s}" for s in members} | {n for n, s in origin.items() if s in members}
        for p, members in model.valuation.items()
    }

    yielded: list[PointedModel] = []
    full = (1 << len(prunable)) - 1
    for mask in range(full, -1, -1):
        relations = {c: set(pairs) for c, pairs in base_relations.items()}
        relations[agent] |= {
            arrow for i, arrow in enumerate(prunable) if mask >> i & 1
        }
        candidate = generated_submodel(
            PointedModel(Model(frozenset(states), relations, valuation), "u0")
        )
        if any(check_bisimulation(prev, candidate).holds for prev in yielded):
            continue
        yielded.append(candidate)
        yield candidate
        if limit is not None and len(yielded) >= limit:
            return
