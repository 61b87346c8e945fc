"""
动作模型
受限模态积的执行、"执行结果是精化"的验证，以及为给定精化合成认知动作
"""

from collections.abc import Iterable

from .errors import (
    ModelValidationError,
    ProductUndefinedError,
    RefinementFailedError,
)
from .kripke import (
    DistinguisherTable,
    bisimulation_classes,
    check_refinement,
    contract,
    generated_submodel,
    greatest_refinement,
)
from .log import logger
from .modelcheck import extension
from .models import (
    ActionModel,
    Model,
    PointedActionModel,
    PointedModel,
    RefinementCheck,
    StateRelation,
)
from .syntax import BOTTOM, TOP, Formula, conjunction, disjunction, is_identifier


def validate_action(action: ActionModel) -> None:
    """检查动作模型不变式：前提不含精化量词、关系端点已声明、每个点都有前提"""
    if not action.points:
        raise ModelValidationError("no points")
    for agent in action.agents:
        if not is_identifier(agent):
            raise ModelValidationError(f"非法主体名: {agent!r}")
        for a, b in sorted(action.relations[agent]):
            for end in (a, b):
                if end not in action.points:
                    raise ModelValidationError(
                        f"动作关系 {agent} 中的二元组 ({a},{b}) 含未声明的点 {end}"
                    )
    for point in sorted(action.points):
        if point not in action.pre:
            raise ModelValidationError(f"动作点 {point} 缺少前提")
    for point, pre in action.pre.items():
        if point not in action.points:
            raise ModelValidationError(f"前提指向未声明的点 {point}")
        if not pre.refinement_free:
            raise ModelValidationError(f"动作点 {point} 的前提含精化量词")


def validate_pointed_action(pointed: PointedActionModel) -> None:
    validate_action(pointed.action)
    if pointed.point not in pointed.action.points:
        raise ModelValidationError(f"动作指定点 {pointed.point} 未声明")


_ESCAPES = str.maketrans({"\\": "\\\\", ",": "\\,", "(": "\\(", ")": "\\)"})


def product_state(state: str, point: str) -> str:
    """积模型中 (s,e) 的状态名，分量中的 \\ , ( ) 以反斜杠转义"""
    return f"({state.translate(_ESCAPES)},{point.translate(_ESCAPES)})"


def _product_pairs(model: Model, action: ActionModel) -> set[tuple[str, str]]:
    pairs = set()
    for point in action.points:
        for s in extension(model, action.pre[point]):
            pairs.add((s, point))
    return pairs


def product(pointed: PointedModel, action: PointedActionModel) -> PointedModel | None:
    """
    受限模态积 M ⊗ A

    状态为满足前提的 (s,e)；((s,e),(t,f)) ∈ R_a 当且仅当 (s,t)∈R_a 且 (e,f)∈R^A_a；
    赋值取第一分量。pre(e) 在 s 不成立时返回 None。
    """
    model, act = pointed.model, action.action
    pairs = _product_pairs(model, act)
    if (pointed.point, action.point) not in pairs:
        return None
    agents = sorted(set(model.agents) | set(act.agents))
    relations: dict[str, set[tuple[str, str]]] = {a: set() for a in agents}
    for s, e in pairs:
        for agent in agents:
            for t in model.successors(agent, s):
                for f in act.successors(agent, e):
                    if (t, f) in pairs:
                        relations[agent].add((product_state(s, e), product_state(t, f)))
    valuation = {
        p: {product_state(s, e) for s, e in pairs if s in members}
        for p, members in model.valuation.items()
    }
    result = Model(
        states=frozenset(product_state(s, e) for s, e in pairs),
        relations=relations,
        valuation=valuation,
    )
    return PointedModel(result, product_state(pointed.point, action.point))


def verify_product_is_refinement(
    pointed: PointedModel, action: PointedActionModel
) -> RefinementCheck:
    """
    检查执行结果是原模型对全部主体的精化

    见证关系为投影 {(t,(t,e))}

    Raises:
        ProductUndefinedError: 前提在指定点不成立
    """
    result = product(pointed, action)
    if result is None:
        raise ProductUndefinedError(f"动作点 {action.point} 的前提在 {pointed.point} 不成立")
    agents = set(pointed.model.agents) | set(action.action.agents)
    check = check_refinement(pointed, result, agents)
    if not check.holds:
        return check
    projection = StateRelation(
        pointed.model,
        result.model,
        frozenset(
            (s, product_state(s, e)) for s, e in _product_pairs(pointed.model, action.action)
        ),
    )
    return RefinementCheck(True, witness=projection)


def _characteristic(table: DistinguisherTable, classes: dict[str, int], wanted: set[int]) -> Formula:
    """在属于 wanted 中互模拟类的状态上恰好为真的公式"""
    all_classes = set(classes.values())
    if wanted == all_classes:
        return TOP
    if not wanted:
        return BOTTOM
    rep: dict[int, str] = {}
    for s in sorted(classes):
        rep.setdefault(classes[s], s)
    parts = []
    for c in sorted(wanted):
        parts.append(
            conjunction(table.formula(rep[c], rep[d]) for d in sorted(all_classes - {c}))
        )
    return disjunction(parts)


def synthesize_action(source: PointedModel, target: PointedModel) -> PointedActionModel:
    """
    为 source ⪰_A target 合成认知动作：执行结果与 target 互模拟

    动作的结构取 target 的生成子模型的互模拟收缩；
    点 u 的前提恰好在与 u 有精化关系的 source 状态上为真，
    由 source 中互模拟类之间的区分公式拼成。

    Raises:
        RefinementFailedError: target 不是 source 对全部主体的精化
    """
    agents = set(source.model.agents) | set(target.model.agents)
    if not check_refinement(source, target, agents).holds:
        raise RefinementFailedError("目标模型不是源模型对全部主体的精化，无法合成动作")
    shape = contract(generated_submodel(target))
    model, refined = source.model, shape.model

    related: dict[str, set[str]] = {u: set() for u in refined.states}
    for s, u in greatest_refinement(model, refined, agents):
        related[u].add(s)

    classes = bisimulation_classes(model)
    table = DistinguisherTable(model)
    pre = {
        u: _characteristic(table, classes, {classes[s] for s in related[u]})
        for u in refined.states
    }
    action = ActionModel(points=refined.states, relations=dict(refined.relations), pre=pre)
    logger.debug(f"合成动作: {len(action.points)} 个点")
    return PointedActionModel(action, shape.point)


def trivial_action(agents: Iterable[str]) -> PointedActionModel:
    """单点、前提 ⊤、各主体自环：执行结果与原模型互模拟"""
    return public_announcement(TOP, agents)


def public_announcement(formula: Formula, agents: Iterable[str]) -> PointedActionModel:
    """公开宣告：单点、前提为 formula、各主体自环（即模型限制）"""
    point = "e"
    action = ActionModel(
        points=frozenset({point}),
        relations={agent: {(point, point)} for agent in agents},
        pre={point: formula},
    )
    return PointedActionModel(action, point)
