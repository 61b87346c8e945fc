"""
命令行入口
每个库功能一个子命令；公式类子命令支持 --batch 批量处理
退出码：0 已回答 / 1 否定回答 / 2 输入错误 / 3 超出预算
"""

import argparse
import asyncio
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from . import __version__
from .actions import product, synthesize_action
from .bq import translate
from .config import DEFAULT_ENUM_DEPTH, DEFAULT_ENUM_DUP, DEFAULT_ENUM_MAX
from .decision import rml_equivalent, rml_satisfiable, rml_valid
from .errors import BudgetExceededError, RMLError
from .io import (
    action_to_dict,
    dumps,
    load_action,
    load_model,
    model_to_dict,
    relation_to_list,
    trace_to_list,
    validity_to_dict,
    verdict_to_dict,
)
from .kripke import check_bisimulation, check_refinement, contract
from .log import logger, set_verbose
from .modelcheck import enumerate_refinements, evaluate_rml
from .models import PointedModel, RefinementCheck
from .parser import formula_lines, parse
from .reduction import reduce, synthesize_group_witness, synthesize_witness
from .render import action_to_dot, model_to_dot
from .syntax import formula_agents, modal_depth, quantifier_count

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass
class Outcome:
    """一次子命令的结果：退出码、文本输出与 JSON 输出"""

    code: int
    text: str
    data: Any


def _agents_arg(value: str) -> list[str]:
    return [a.strip() for a in value.split(",") if a.strip()]


def _parse_with(text: str, extra_agents: Sequence[str] = ()) -> Any:
    """裸 E/A 量化的主体全集取输入中出现的全部主体"""
    agents = set(extra_agents) | formula_agents(parse(text))
    return parse(text, agents=agents)


def _model_outcome(pointed: PointedModel, args, name: str = "M") -> Outcome:
    text = model_to_dot(pointed, name) if args.dot else dumps(model_to_dict(pointed))
    return Outcome(EXIT_OK, text.rstrip("\n"), model_to_dict(pointed))


def _check_outcome(check: RefinementCheck) -> Outcome:
    if check.holds:
        pairs = relation_to_list(check.witness)
        return Outcome(
            EXIT_OK, "holds\n" + dumps(pairs), {"holds": True, "witness": pairs}
        )
    formula = check.distinguisher.text
    return Outcome(
        EXIT_NEGATIVE,
        f"fails\ndistinguisher: {formula}",
        {"holds": False, "distinguisher": formula},
    )


# ============================================================
# 公式类子命令（可批量）
# ============================================================


def _do_parse(args, text: str) -> Outcome:
    formula = parse(text)
    data = {
        "formula": formula.text,
        "size": formula.size,
        "modal_depth": modal_depth(formula),
        "quantifiers": quantifier_count(formula),
    }
    return Outcome(EXIT_OK, formula.text, data)


def _do_check(args, text: str) -> Outcome:
    pointed = args.loaded_model
    formula = _parse_with(text, pointed.model.agents)
    value = evaluate_rml(pointed, formula, max_nodes=args.max_nodes)
    return Outcome(EXIT_OK if value else EXIT_NEGATIVE, "true" if value else "false", {"result": value})


def _do_reduce(args, text: str) -> Outcome:
    formula = _parse_with(text)
    reduced, trace = reduce(formula, max_nodes=args.max_nodes)
    data: dict[str, Any] = {"formula": reduced.text}
    lines = [reduced.text]
    if args.trace:
        data["trace"] = trace_to_list(trace)
        lines += [f"{s.rule}: {s.before.text}  =>  {s.after.text}" for s in trace.steps]
    return Outcome(EXIT_OK, "\n".join(lines), data)


def _do_valid(args, text: str) -> Outcome:
    result = rml_valid(_parse_with(text), max_nodes=args.max_nodes)
    if result.valid:
        return Outcome(EXIT_OK, "valid", validity_to_dict(result))
    body = "invalid\n" + dumps(model_to_dict(result.countermodel))
    return Outcome(EXIT_NEGATIVE, body, validity_to_dict(result))


def _do_sat(args, text: str) -> Outcome:
    verdict = rml_satisfiable(_parse_with(text), max_nodes=args.max_nodes)
    if verdict.satisfiable:
        body = "satisfiable\n" + dumps(model_to_dict(verdict.model))
        return Outcome(EXIT_OK, body, verdict_to_dict(verdict))
    return Outcome(EXIT_NEGATIVE, "unsatisfiable", verdict_to_dict(verdict))


def _do_translate(args, text: str) -> Outcome:
    result = translate(_parse_with(text))
    return Outcome(EXIT_OK, result.text, {"formula": result.text})


FORMULA_COMMANDS: dict[str, Callable[[Any, str], Outcome]] = {
    "parse": _do_parse,
    "check": _do_check,
    "reduce": _do_reduce,
    "valid": _do_valid,
    "sat": _do_sat,
    "translate-bq": _do_translate,
}


# ============================================================
# 模型类子命令
# ============================================================


def _do_refine(args) -> Outcome:
    source, target = load_model(args.source), load_model(args.target)
    return _check_outcome(check_refinement(source, target, _agents_arg(args.agents)))


def _do_bisim(args) -> Outcome:
    source, target = load_model(args.source), load_model(args.target)
    return _check_outcome(check_bisimulation(source, target, except_prop=args.except_prop))


def _do_contract(args) -> Outcome:
    return _model_outcome(contract(load_model(args.model)), args)


def _do_equiv(args) -> Outcome:
    left, right = _parse_with(args.left), _parse_with(args.right)
    result = rml_equivalent(left, right, max_nodes=args.max_nodes)
    if result.valid:
        return Outcome(EXIT_OK, "equivalent", validity_to_dict(result))
    body = "not equivalent\n" + dumps(model_to_dict(result.countermodel))
    return Outcome(EXIT_NEGATIVE, body, validity_to_dict(result))


def _do_witness(args) -> Outcome:
    pointed = load_model(args.model)
    agents = _agents_arg(args.agent)
    formula = _parse_with(args.formula, pointed.model.agents)
    if len(agents) == 1:
        result = synthesize_witness(pointed, agents[0], formula, max_nodes=args.max_nodes)
    else:
        result = synthesize_group_witness(pointed, agents, formula, max_nodes=args.max_nodes)
    if result is None:
        return Outcome(EXIT_NEGATIVE, "none", None)
    return _model_outcome(result, args, "W")


def _do_exec(args) -> Outcome:
    pointed, action = load_model(args.model), load_action(args.action)
    result = product(pointed, action)
    if result is None:
        return Outcome(EXIT_NEGATIVE, "undefined", None)
    return _model_outcome(result, args, "P")


def _do_synth_action(args) -> Outcome:
    action = synthesize_action(load_model(args.source), load_model(args.target))
    text = action_to_dot(action) if args.dot else dumps(action_to_dict(action))
    return Outcome(EXIT_OK, text.rstrip("\n"), action_to_dict(action))


def _do_enumerate(args) -> Outcome:
    pointed = load_model(args.model)
    models = list(
        enumerate_refinements(pointed, args.agent, args.depth, args.dup, limit=args.max)
    )
    data = [model_to_dict(m) for m in models]
    if args.dot:
        text = "\n".join(model_to_dot(m, f"R{i}") for i, m in enumerate(models))
    else:
        text = dumps(data)
    return Outcome(EXIT_OK, text.rstrip("\n"), data)


MODEL_COMMANDS: dict[str, Callable[[Any], Outcome]] = {
    "refine": _do_refine,
    "bisim": _do_bisim,
    "contract": _do_contract,
    "equiv": _do_equiv,
    "witness": _do_witness,
    "exec": _do_exec,
    "synth-action": _do_synth_action,
    "enumerate": _do_enumerate,
}


# ============================================================
# 参数与调度
# ============================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmlkit", description="精化模态逻辑工作台：模型检查、归约、判定与精化构造"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="以 JSON 输出")
    parser.add_argument("--max-nodes", type=int, default=None, help="归约的结点预算")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    def formula_command(name: str, help_text: str, with_model: bool = False):
        p = sub.add_parser(name, help=help_text)
        if with_model:
            p.add_argument("model", help="模型 JSON 文件")
        p.add_argument("formula", nargs="?", help="公式文本")
        p.add_argument("--batch", metavar="FILE", help="每行一个公式")
        p.add_argument("--jobs", type=int, default=1, help="批量处理的并发数")
        return p

    formula_command("parse", "解析并规范打印公式")
    formula_command("check", "在点模型上求值（可含精化量词）", with_model=True)
    p = formula_command("reduce", "消去精化量词")
    p.add_argument("--trace", action="store_true", help="输出改写记录")
    formula_command("valid", "有效性判定")
    formula_command("sat", "可满足性判定")
    formula_command("translate-bq", "翻译为互模拟量化公式")

    for name, help_text in (("refine", "精化检查 M ⪰_B N"), ("bisim", "互模拟检查")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("source", help="源模型 JSON")
        p.add_argument("target", help="目标模型 JSON")
        if name == "refine":
            p.add_argument("--agents", required=True, help="逗号分隔的主体集合 B")
        else:
            p.add_argument("--except", dest="except_prop", default=None, help="忽略的命题")

    p = sub.add_parser("contract", help="互模拟收缩")
    p.add_argument("model")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("equiv", help="等价判定")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("witness", help="构造存在精化量词的见证模型")
    p.add_argument("model")
    p.add_argument("agent", help="主体，逗号分隔时依次构造")
    p.add_argument("formula")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("exec", help="执行认知动作（受限模态积）")
    p.add_argument("model")
    p.add_argument("action")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("synth-action", help="为精化合成认知动作")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("enumerate", help="有界枚举 a-精化")
    p.add_argument("model")
    p.add_argument("agent")
    p.add_argument("--depth", type=int, default=DEFAULT_ENUM_DEPTH)
    p.add_argument("--dup", type=int, default=DEFAULT_ENUM_DUP)
    p.add_argument("--max", type=int, default=DEFAULT_ENUM_MAX)
    p.add_argument("--dot", action="store_true")
    return parser


def _guarded(fn: Callable[..., Outcome], *fn_args) -> Outcome:
    """把库异常映射为退出码"""
    try:
        return fn(*fn_args)
    except BudgetExceededError as e:
        return Outcome(EXIT_BUDGET, f"错误: {e}", {"error": str(e)})
    except (RMLError, OSError, ValueError) as e:
        return Outcome(EXIT_INPUT, f"错误: {e}", {"error": str(e)})


def _read_batch(path: str) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return formula_lines(f)


async def _run_batch(fn, args, lines: list[str]) -> list[Outcome]:
    semaphore = asyncio.Semaphore(max(1, args.jobs))

    async def one(text: str) -> Outcome:
        async with semaphore:
            return await asyncio.to_thread(_guarded, fn, args, text)

    return await asyncio.gather(*(one(text) for text in lines))


def _emit(outcome: Outcome, as_json: bool) -> None:
    if outcome.code in (EXIT_INPUT, EXIT_BUDGET):
        print(outcome.text, file=sys.stderr)
        if as_json:
            print(dumps(outcome.data))
        return
    print(dumps(outcome.data) if as_json else outcome.text)


def _run_formula_command(args) -> int:
    fn = FORMULA_COMMANDS[args.command]
    if args.command == "check":
        try:
            args.loaded_model = load_model(args.model)
        except (RMLError, OSError) as e:
            print(f"错误: {e}", file=sys.stderr)
            return EXIT_INPUT
    if args.batch is None:
        if args.formula is None:
            print("错误: 需要公式参数或 --batch FILE", file=sys.stderr)
            return EXIT_INPUT
        outcome = _guarded(fn, args, args.formula)
        _emit(outcome, args.json)
        return outcome.code

    try:
        lines = _read_batch(args.batch)
    except OSError as e:
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_INPUT
    outcomes = asyncio.run(_run_batch(fn, args, lines))
    logger.info(f"批量处理完成: {len(lines)} 行")
    if args.json:
        print(dumps([
            {"line": text, "exit": o.code, "result": o.data}
            for text, o in zip(lines, outcomes)
        ]))
    else:
        for o in outcomes:
            stream = sys.stderr if o.code in (EXIT_INPUT, EXIT_BUDGET) else sys.stdout
            print(o.text, file=stream)
    return max((o.code for o in outcomes), default=EXIT_OK)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    set_verbose(args.verbose)
    if args.command in FORMULA_COMMANDS:
        return _run_formula_command(args)
    outcome = _guarded(MODEL_COMMANDS[args.command], args)
    _emit(outcome, args.json)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
