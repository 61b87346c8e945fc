"""
精化量词消去
按最内层优先把 ∃_a / ∀_a 归约为普通模态公式，并可从成立的存在性检查构造见证精化
"""

from collections.abc import Iterable
from dataclasses import dataclass, field

from .config import resolve_max_nodes
from .errors import BudgetExceededError, RefinementQuantifierError
from .kripke import generated_submodel
from .log import logger
from .modelcheck import extension
from .models import Model, PointedModel
from .normal_forms import DfConjunct, DisjunctiveForm, simplify, to_disjunctive
from .syntax import (
    AllRef,
    And,
    Cover,
    Diamond,
    Formula,
    Not,
    SomeRef,
    conjunction,
    disjunction,
    require_refinement_free,
)

# 归约规则名
RULES = ("RProp", "RK", "RKmulti", "RKconj", "OrSplit", "PropFactor", "DNF")


@dataclass(frozen=True)
class TraceStep:
    """一步改写：before 与 after 等价"""

    rule: str
    before: Formula
    after: Formula


@dataclass
class ReductionTrace:
    """归约过程记录"""

    steps: list[TraceStep] = field(default_factory=list)

    def record(self, rule: str, before: Formula, after: Formula) -> None:
        self.steps.append(TraceStep(rule, before, after))

    def __len__(self) -> int:
        return len(self.steps)


class _Reducer:
    """
    单次归约的上下文

    ∃_a 作用在析取范式上的结果按 (a, 析取范式) 备忘，
    见证构造复用同一份备忘来判断哪个合取支/成员可被满足。
    """

    def __init__(self, max_nodes: int | None = None, trace: ReductionTrace | None = None):
        self.max_nodes = resolve_max_nodes(max_nodes)
        self.trace = trace if trace is not None else ReductionTrace()
        self._memo: dict[tuple[str, object], Formula] = {}

    def _guard(self, formula: Formula) -> Formula:
        if formula.size > self.max_nodes:
            logger.warning(f"归约结果规模 {formula.size} 超出预算 {self.max_nodes}")
            raise BudgetExceededError(self.max_nodes, formula.size)
        return formula

    # ---------------- 驱动 ----------------

    def reduce(self, formula: Formula) -> Formula:
        if formula.refinement_free:
            return formula
        if isinstance(formula, SomeRef):
            body = self.reduce(formula.sub)
            return self.eliminate(formula.agent, body)
        if isinstance(formula, AllRef):
            # ∀_aφ ≡ ¬∃_a¬φ
            body = self.reduce(formula.sub)
            inner = self.eliminate(formula.agent, simplify(Not(body)))
            return self._guard(simplify(Not(inner)))
        return self._guard(simplify(formula.map_children(self.reduce)))

    def eliminate(self, agent: str, body: Formula) -> Formula:
        """∃_a body，body 不含精化量词"""
        df = to_disjunctive(body, max_conjuncts=self.max_nodes)
        if df.formula != body:
            self.trace.record("DNF", SomeRef(agent, body), SomeRef(agent, df.formula))
        return self.exists(agent, df)

    # ---------------- 规则 ----------------

    def exists(self, agent: str, df: DisjunctiveForm) -> Formula:
        key = (agent, df)
        if key in self._memo:
            return self._memo[key]
        if len(df.conjuncts) == 1:
            result = self.exists_conjunct(agent, df.conjuncts[0])
        else:
            self.trace.record(
                "OrSplit",
                SomeRef(agent, df.formula),
                disjunction(SomeRef(agent, c.formula) for c in df.conjuncts),
            )
            result = self._guard(
                simplify(disjunction(self.exists_conjunct(agent, c) for c in df.conjuncts))
            )
        self._memo[key] = result
        return result

    def exists_conjunct(self, agent: str, conjunct: DfConjunct) -> Formula:
        key = (agent, conjunct)
        if key in self._memo:
            return self._memo[key]
        phi0 = conjunct.propositional
        before = SomeRef(agent, conjunct.formula)
        if not conjunct.covers:
            self.trace.record("RProp", before, phi0)
            self._memo[key] = phi0
            return phi0

        covers = [
            (b, members, Cover(b, tuple(m.formula for m in members)))
            for b, members in conjunct.covers
        ]
        cover_part = conjunction(c for _, _, c in covers)
        if conjunct.literals:
            self.trace.record("PropFactor", before, And(phi0, SomeRef(agent, cover_part)))
        if len(covers) > 1:
            self.trace.record(
                "RKconj",
                SomeRef(agent, cover_part),
                conjunction(SomeRef(agent, c) for _, _, c in covers),
            )

        parts: list[Formula] = [phi0]
        for b, members, cover in covers:
            if b == agent:
                self.trace.record(
                    "RK",
                    SomeRef(agent, cover),
                    conjunction(Diamond(agent, SomeRef(agent, m.formula)) for m in members),
                )
                parts.append(
                    conjunction(Diamond(agent, self.exists(agent, m)) for m in members)
                )
            else:
                self.trace.record(
                    "RKmulti",
                    SomeRef(agent, cover),
                    Cover(b, tuple(SomeRef(agent, m.formula) for m in members)),
                )
                parts.append(Cover(b, tuple(self.exists(agent, m) for m in members)))
        result = self._guard(simplify(conjunction(parts)))
        self._memo[key] = result
        return result


# ============================================================
# 公开运算
# ============================================================


def eliminate_innermost(formula: Formula, max_nodes: int | None = None) -> Formula:
    """
    消去一个最内层存在精化量词 ∃_a ψ（ψ 不含精化量词）

    Raises:
        RefinementQuantifierError: 输入不是这种形状
    """
    if not isinstance(formula, SomeRef) or not formula.sub.refinement_free:
        raise RefinementQuantifierError(f"需要形如 E_a ψ 且 ψ 不含精化量词: {formula.text}")
    return _Reducer(max_nodes).eliminate(formula.agent, formula.sub)


def reduce(
    formula: Formula, max_nodes: int | None = None
) -> tuple[Formula, ReductionTrace]:
    """
    把 L_∀ 公式归约为等价的普通模态公式

    最内层优先；∀ 先按对偶改写为 ¬∃¬。每次规则应用后做化简。

    Args:
        formula: 任意 L_∀ 公式
        max_nodes: 结点预算，None 时取环境变量或默认值

    Returns:
        (不含精化量词的公式, 改写记录)

    Raises:
        BudgetExceededError: 中间结果超出预算
    """
    reducer = _Reducer(max_nodes)
    result = reducer.reduce(formula)
    logger.debug(
        f"归约完成: {len(reducer.trace)} 步，{formula.size} -> {result.size} 个结点"
    )
    return result, reducer.trace


# ============================================================
# 见证构造
# ============================================================


class _WitnessBuilder:
    """
    按析取范式的结构递归构造 a-精化

    原模型整体保留；需要改变的状态复制出新点：
    对 a 的覆盖，新点的 a-箭头只指向各成员的子见证；
    对其他主体 b 的覆盖，原 b-后继逐一换成满足某个成员的子见证，并保证每个成员都有见证；
    不受约束的主体照搬原箭头。
    """

    def __init__(self, model: Model, agent: str, reducer: _Reducer):
        self.model = model
        self.agent = agent
        self.reducer = reducer
        self.relations: dict[str, set[tuple[str, str]]] = {
            c: set(pairs) for c, pairs in model.relations.items()
        }
        self.relations.setdefault(agent, set())
        self.valuation: dict[str, set[str]] = {
            p: set(members) for p, members in model.valuation.items()
        }
        self.new_states: list[str] = []
        self._ext: dict[Formula, frozenset[str]] = {}
        self._memo: dict[tuple[str, DisjunctiveForm], str] = {}
        self._counter = 0

    def _extension(self, formula: Formula) -> frozenset[str]:
        if formula not in self._ext:
            self._ext[formula] = extension(self.model, formula)
        return self._ext[formula]

    def satisfies(self, state: str, df: DisjunctiveForm) -> bool:
        return state in self._extension(self.reducer.exists(self.agent, df))

    def _fresh_state(self, origin: str) -> str:
        taken = self.model.states
        while True:
            name = f"w{self._counter}"
            self._counter += 1
            if name not in taken:
                break
        self.new_states.append(name)
        for p in self.model.labels(origin):
            self.valuation[p].add(name)
        return name

    def _pick(self, candidates: Iterable[str], df: DisjunctiveForm) -> str:
        return next(t for t in sorted(candidates) if self.satisfies(t, df))

    def realize(self, state: str, df: DisjunctiveForm) -> str | None:
        """返回新模型中满足 df 且被 state 精化关联的状态；不可满足时为 None"""
        key = (state, df)
        if key in self._memo:
            return self._memo[key]
        if not self.satisfies(state, df):
            return None
        conjunct = next(
            c
            for c in df.conjuncts
            if state
            in self._extension(self.reducer.exists_conjunct(self.agent, c))
        )
        if not conjunct.covers:
            self._memo[key] = state
            return state

        new = self._fresh_state(state)
        self._memo[key] = new
        covered = dict(conjunct.covers)
        for c in sorted(set(self.relations) | set(covered)):
            arrows = self.relations.setdefault(c, set())
            successors = self.model.successors(c, state)
            if c not in covered:
                arrows.update((new, t) for t in successors)
                continue
            members = covered[c]
            if c != self.agent:
                for t in sorted(successors):
                    member = next(m for m in members if self.satisfies(t, m))
                    arrows.add((new, self.realize(t, member)))
            for member in members:
                t = self._pick(successors, member)
                arrows.add((new, self.realize(t, member)))
        return new

    def build(self, point: str) -> PointedModel:
        model = Model(
            states=self.model.states | set(self.new_states),
            relations=self.relations,
            valuation=self.valuation,
        )
        return generated_submodel(PointedModel(model, point))


def synthesize_witness(
    pointed: PointedModel,
    agent: str,
    formula: Formula,
    max_nodes: int | None = None,
) -> PointedModel | None:
    """
    若 M_s ⊨ ∃_a ψ，构造满足 ψ 的 a-精化 N_t；否则返回 None

    Args:
        pointed: 原点模型
        agent: 精化的主体
        formula: 不含精化量词的 ψ
    """
    require_refinement_free(formula)
    reducer = _Reducer(max_nodes)
    df = to_disjunctive(formula, max_conjuncts=reducer.max_nodes)
    builder = _WitnessBuilder(pointed.model, agent, reducer)
    point = builder.realize(pointed.point, df)
    if point is None:
        logger.debug(f"{pointed.point} 处不存在满足 {formula.text} 的 {agent}-精化")
        return None
    return builder.build(point)


def synthesize_group_witness(
    pointed: PointedModel,
    agents: Iterable[str],
    formula: Formula,
    max_nodes: int | None = None,
) -> PointedModel | None:
    """
    ∃_{a1}…∃_{an} ψ 的见证：依次对每个主体构造见证并复合

    各步得到的 a_i-精化复合为 {a1,…,an}-精化
    """
    require_refinement_free(formula)
    order = list(agents)
    current = pointed
    for i, agent in enumerate(order):
        rest = formula
        for later in reversed(order[i + 1 :]):
            rest = SomeRef(later, rest)
        target, _ = reduce(rest, max_nodes=max_nodes)
        witness = synthesize_witness(current, agent, target, max_nodes=max_nodes)
        if witness is None:
            return None
        current = witness
    return current
