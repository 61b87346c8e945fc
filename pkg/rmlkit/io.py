"""
JSON 读写
模型、动作模型、状态关系、判定结果与归约记录的序列化；输出键与列表均排序
"""

import json
from pathlib import Path
from typing import Any

from .actions import validate_pointed_action
from .decision import ValidityResult, Verdict
from .errors import InputFormatError
from .kripke import validate_pointed
from .models import ActionModel, Model, PointedActionModel, PointedModel, StateRelation
from .parser import parse
from .reduction import ReductionTrace

MODEL_KEYS = {"states", "point", "valuation", "relations"}
ACTION_KEYS = {"states", "point", "pre", "relations"}


def _check_keys(data: Any, allowed: set[str], what: str) -> None:
    if not isinstance(data, dict):
        raise InputFormatError(f"{what}必须是 JSON 对象")
    unknown = set(data) - allowed
    if unknown:
        raise InputFormatError(f"{what}含未知字段: {', '.join(sorted(unknown))}")
    for key in ("states", "point"):
        if key not in data:
            raise InputFormatError(f"{what}缺少字段 {key}")


def _string_list(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputFormatError(f"{where} 必须是字符串列表")
    return value


def _relations(value: Any) -> dict[str, set[tuple[str, str]]]:
    if not isinstance(value, dict):
        raise InputFormatError("relations 必须是对象")
    out: dict[str, set[tuple[str, str]]] = {}
    for agent, pairs in value.items():
        if not isinstance(pairs, list):
            raise InputFormatError(f"relations.{agent} 必须是二元组列表")
        out[agent] = set()
        for pair in pairs:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, str) for v in pair)
            ):
                raise InputFormatError(f"relations.{agent} 含非法二元组: {pair!r}")
            out[agent].add((pair[0], pair[1]))
    return out


def _relations_to_dict(relations) -> dict[str, list[list[str]]]:
    return {agent: [list(p) for p in sorted(pairs)] for agent, pairs in relations.items()}


# ============================================================
# 模型
# ============================================================


def model_from_dict(data: Any) -> PointedModel:
    """
    从 JSON 对象构造点模型并校验

    Raises:
        InputFormatError: 字段缺失、未知字段或类型错误
        ModelValidationError: 模型不变式不成立
    """
    _check_keys(data, MODEL_KEYS, "模型")
    states = _string_list(data["states"], "states")
    valuation_raw = data.get("valuation", {})
    if not isinstance(valuation_raw, dict):
        raise InputFormatError("valuation 必须是对象")
    valuation = {
        p: set(_string_list(members, f"valuation.{p}"))
        for p, members in valuation_raw.items()
    }
    if not isinstance(data["point"], str):
        raise InputFormatError("point 必须是字符串")
    model = Model(frozenset(states), _relations(data.get("relations", {})), valuation)
    pointed = PointedModel(model, data["point"])
    validate_pointed(pointed)
    return pointed


def model_to_dict(pointed: PointedModel) -> dict[str, Any]:
    model = pointed.model
    return {
        "states": list(model.sorted_states),
        "point": pointed.point,
        "valuation": {p: sorted(members) for p, members in model.valuation.items()},
        "relations": _relations_to_dict(model.relations),
    }


def action_from_dict(data: Any) -> PointedActionModel:
    """
    从 JSON 对象构造认知动作；前提以公式文本给出

    Raises:
        InputFormatError / FormulaSyntaxError / ModelValidationError
    """
    _check_keys(data, ACTION_KEYS, "动作模型")
    points = _string_list(data["states"], "states")
    pre_raw = data.get("pre", {})
    if not isinstance(pre_raw, dict) or not all(isinstance(v, str) for v in pre_raw.values()):
        raise InputFormatError("pre 必须是 点 -> 公式文本 的对象")
    if not isinstance(data["point"], str):
        raise InputFormatError("point 必须是字符串")
    pre = {point: parse(text) for point, text in pre_raw.items()}
    action = ActionModel(frozenset(points), _relations(data.get("relations", {})), pre)
    pointed = PointedActionModel(action, data["point"])
    validate_pointed_action(pointed)
    return pointed


def action_to_dict(pointed: PointedActionModel) -> dict[str, Any]:
    action = pointed.action
    return {
        "states": sorted(action.points),
        "point": pointed.point,
        "pre": {point: f.text for point, f in sorted(action.pre.items())},
        "relations": _relations_to_dict(action.relations),
    }


def _load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: JSON 格式错误 (第 {e.lineno} 行第 {e.colno} 列)") from e


def load_model(path: str | Path) -> PointedModel:
    return model_from_dict(_load_json(path))


def load_action(path: str | Path) -> PointedActionModel:
    return action_from_dict(_load_json(path))


# ============================================================
# 结果
# ============================================================


def relation_to_list(relation: StateRelation) -> list[list[str]]:
    return [list(pair) for pair in relation.sorted_pairs()]


def verdict_to_dict(verdict: Verdict) -> dict[str, Any]:
    return {
        "status": verdict.status,
        "model": model_to_dict(verdict.model) if verdict.model is not None else None,
    }


def validity_to_dict(result: ValidityResult) -> dict[str, Any]:
    return {
        "valid": result.valid,
        "countermodel": (
            model_to_dict(result.countermodel) if result.countermodel is not None else None
        ),
    }


def trace_to_list(trace: ReductionTrace) -> list[dict[str, str]]:
    return [
        {"rule": step.rule, "before": step.before.text, "after": step.after.text}
        for step in trace.steps
    ]


def dumps(data: Any) -> str:
    """确定性的 JSON 文本"""
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True)
