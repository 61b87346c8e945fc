"""
Kripke 模型运算
互模拟与 B-精化检查（最大不动点删除）、区分公式提取、互模拟收缩、
生成子模型以及"先膨胀再剪枝"的精化构造
"""

from collections import deque
from collections.abc import Iterable

from .errors import (
    ModelValidationError,
    NotDistinguishableError,
    RefinementFailedError,
    RelationMismatchError,
)
from .log import logger
from .models import Model, PointedModel, RefinementCheck, StateRelation
from .syntax import (
    Box,
    Diamond,
    Formula,
    Not,
    Prop,
    conjunction,
    disjunction,
    fresh_prop,
    is_identifier,
)


Pair = tuple[str, str]


# ============================================================
# 校验
# ============================================================


def validate(model: Model) -> None:
    """
    检查模型不变式

    Raises:
        ModelValidationError: 报告第一个被违反的不变式及相关 id
    """
    if not model.states:
        raise ModelValidationError("no states")
    for agent in model.agents:
        if not is_identifier(agent):
            raise ModelValidationError(f"非法主体名: {agent!r}")
        for a, b in sorted(model.relations[agent]):
            for end in (a, b):
                if end not in model.states:
                    raise ModelValidationError(
                        f"关系 {agent} 中的二元组 ({a},{b}) 含未声明状态 {end}"
                    )
    for prop in model.props:
        if not is_identifier(prop):
            raise ModelValidationError(f"非法命题名: {prop!r}")
        for s in sorted(model.valuation[prop]):
            if s not in model.states:
                raise ModelValidationError(f"命题 {prop} 的赋值含未声明状态 {s}")


def validate_pointed(pointed: PointedModel) -> None:
    validate(pointed.model)
    if pointed.point not in pointed.model.states:
        raise ModelValidationError(f"指定点 {pointed.point} 未声明")


# ============================================================
# 最大不动点
# ============================================================


class _Fixpoint:
    """
    左右两个模型之间最大的 (forth, back) 关系

    按轮次删除：每轮只依据本轮开始时的关系判断，
    因此被删除的二元组引用的其他二元组都在更早的轮次被删除，
    这正是提取区分公式所需的良基顺序。
    """

    def __init__(
        self,
        left: Model,
        right: Model,
        forth_agents: Iterable[str],
        back_agents: Iterable[str],
        except_prop: str | None = None,
    ):
        self.left = left
        self.right = right
        self.forth_agents = tuple(sorted(set(forth_agents)))
        self.back_agents = tuple(sorted(set(back_agents)))
        self.props = tuple(
            sorted((set(left.props) | set(right.props)) - {except_prop})
        )
        # 被删除二元组 -> 删除原因
        self.reasons: dict[Pair, tuple] = {}
        self.rounds = 0
        self.pairs: set[Pair] = self._compute()

    def _atom_reason(self, s: str, t: str) -> tuple | None:
        for p in self.props:
            in_left = self.left.holds(p, s)
            in_right = self.right.holds(p, t)
            if in_left != in_right:
                return ("atom", p, in_right)
        return None

    def _violation(self, s: str, t: str, current: set[Pair]) -> tuple | None:
        left, right = self.left, self.right
        for agent in self.back_agents:
            left_succ = left.successors(agent, s)
            for t2 in sorted(right.successors(agent, t)):
                if not any((s2, t2) in current for s2 in left_succ):
                    return ("back", agent, t2)
        for agent in self.forth_agents:
            right_succ = right.successors(agent, t)
            for s2 in sorted(left.successors(agent, s)):
                if not any((s2, t2) in current for t2 in right_succ):
                    return ("forth", agent, s2)
        return None

    def _compute(self) -> set[Pair]:
        current: set[Pair] = set()
        for s in self.left.sorted_states:
            for t in self.right.sorted_states:
                reason = self._atom_reason(s, t)
                if reason is None:
                    current.add((s, t))
                else:
                    self.reasons[(s, t)] = reason

        while True:
            removed: dict[Pair, tuple] = {}
            for s, t in current:
                reason = self._violation(s, t, current)
                if reason is not None:
                    removed[(s, t)] = reason
            if not removed:
                break
            self.rounds += 1
            current.difference_update(removed)
            self.reasons.update(removed)
            logger.debug(f"不动点第 {self.rounds} 轮删除 {len(removed)} 个二元组")
        return current

    def reachable_from(self, s: str, t: str) -> frozenset[Pair]:
        """从 (s,t) 出发沿同一主体的后继对可达的存活二元组"""
        agents = sorted(set(self.left.agents) | set(self.right.agents))
        seen = {(s, t)}
        queue = deque([(s, t)])
        while queue:
            x, y = queue.popleft()
            for agent in agents:
                for x2 in self.left.successors(agent, x):
                    for y2 in self.right.successors(agent, y):
                        pair = (x2, y2)
                        if pair in self.pairs and pair not in seen:
                            seen.add(pair)
                            queue.append(pair)
        return frozenset(seen)

    def distinguisher(self, s: str, t: str, memo: dict[Pair, Formula] | None = None) -> Formula:
        """
        已删除二元组 (s,t) 的区分公式：在右侧 t 为真、左侧 s 为假

        back 失败给出 ◇，forth 失败给出 □；
        因此只对 forth 被要求的主体出现 □。
        """
        if memo is None:
            memo = {}
        pair = (s, t)
        if pair in memo:
            return memo[pair]
        reason = self.reasons[pair]
        kind = reason[0]
        if kind == "atom":
            _, prop, true_on_right = reason
            result: Formula = Prop(prop) if true_on_right else Not(Prop(prop))
        elif kind == "back":
            _, agent, t2 = reason
            parts = [
                self.distinguisher(s2, t2, memo)
                for s2 in sorted(self.left.successors(agent, s))
            ]
            result = Diamond(agent, conjunction(parts))
        else:
            _, agent, s2 = reason
            parts = [
                self.distinguisher(s2, t2, memo)
                for t2 in sorted(self.right.successors(agent, t))
            ]
            result = Box(agent, disjunction(parts))
        memo[pair] = result
        return result


def _universe(*models: Model, extra: Iterable[str] = ()) -> set[str]:
    out = set(extra)
    for m in models:
        out |= set(m.agents)
    return out


def _check(
    source: PointedModel,
    target: PointedModel,
    forth_agents: Iterable[str],
    back_agents: Iterable[str],
    except_prop: str | None = None,
) -> RefinementCheck:
    fp = _Fixpoint(source.model, target.model, forth_agents, back_agents, except_prop)
    s, t = source.point, target.point
    if (s, t) in fp.pairs:
        witness = StateRelation(source.model, target.model, fp.reachable_from(s, t))
        return RefinementCheck(True, witness=witness)
    return RefinementCheck(False, distinguisher=fp.distinguisher(s, t))


# ============================================================
# 公开运算
# ============================================================


def check_bisimulation(
    source: PointedModel, target: PointedModel, except_prop: str | None = None
) -> RefinementCheck:
    """
    互模拟检查；给定 except_prop 时为除该命题外的受限互模拟

    Returns:
        RefinementCheck；不成立时区分公式在 target 为真、在 source 为假
    """
    agents = _universe(source.model, target.model)
    return _check(source, target, agents, agents, except_prop)


def check_refinement(
    source: PointedModel, target: PointedModel, agents: Iterable[str]
) -> RefinementCheck:
    """
    判断 source ⪰_B target（target 是 source 的 B-精化）

    所有主体要求 back，B 之外的主体要求 forth。
    不成立时给出的区分公式只对 B 之外的主体使用 □，
    对单个主体 a 即 a-正公式：在 target 为真而在 source 为假。
    """
    refined = set(agents)
    universe = _universe(source.model, target.model, extra=refined)
    result = _check(source, target, universe - refined, universe)
    logger.debug(
        f"精化检查 {source.point} ⪰_{{{','.join(sorted(refined))}}} {target.point}: "
        f"{result.holds}"
    )
    return result


def greatest_refinement(left: Model, right: Model, agents: Iterable[str]) -> frozenset[Pair]:
    """两个模型之间最大的 B-精化关系（全部二元组，不限于某对点可达的部分）"""
    refined = set(agents)
    universe = _universe(left, right, extra=refined)
    return frozenset(_Fixpoint(left, right, universe - refined, universe).pairs)


def check_witness(
    relation: StateRelation,
    agents: Iterable[str] = (),
    except_prop: str | None = None,
) -> bool:
    """
    判断给定关系是否满足 B-精化的各条件（atoms、全部主体的 back、B 之外主体的 forth）

    agents 为空时即检查互模拟
    """
    left, right = relation.left, relation.right
    if not relation.pairs:
        return False
    refined = set(agents)
    universe = _universe(left, right, extra=refined)
    props = (set(left.props) | set(right.props)) - {except_prop}
    pairs = relation.pairs
    for s, t in pairs:
        if s not in left.states or t not in right.states:
            return False
        if any(left.holds(p, s) != right.holds(p, t) for p in props):
            return False
        for agent in universe:
            left_succ = left.successors(agent, s)
            right_succ = right.successors(agent, t)
            for t2 in right_succ:
                if not any((s2, t2) in pairs for s2 in left_succ):
                    return False
            if agent in refined:
                continue
            for s2 in left_succ:
                if not any((s2, t2) in pairs for t2 in right_succ):
                    return False
    return True


def identity_relation(model: Model) -> StateRelation:
    return StateRelation(model, model, frozenset((s, s) for s in model.states))


def compose_refinements(first: StateRelation, second: StateRelation) -> StateRelation:
    """
    关系复合 {(x,z) | (x,y)∈first, (y,z)∈second}

    Raises:
        RelationMismatchError: first.right 与 second.left 不是同一模型
    """
    if first.right != second.left:
        raise RelationMismatchError("复合的两个关系不共享中间模型")
    by_middle: dict[str, set[str]] = {}
    for y, z in second.pairs:
        by_middle.setdefault(y, set()).add(z)
    pairs = {(x, z) for x, y in first.pairs for z in by_middle.get(y, ())}
    return StateRelation(first.left, second.right, frozenset(pairs))


def bisimulation_classes(model: Model) -> dict[str, int]:
    """
    分划求精：返回 状态 -> 互模拟类编号

    初始按真命题集合分块，之后按 (块, 各主体后继块集合) 的签名反复细分直到稳定。
    编号按各块最小状态的字典序分配。
    """
    block: dict[str, int] = {}
    signatures: dict[object, int] = {}
    for s in model.sorted_states:
        sig = model.labels(s)
        block[s] = signatures.setdefault(sig, len(signatures))

    while True:
        signatures = {}
        refined: dict[str, int] = {}
        for s in model.sorted_states:
            sig = (
                block[s],
                tuple(
                    frozenset(block[t] for t in model.successors(agent, s))
                    for agent in model.agents
                ),
            )
            refined[s] = signatures.setdefault(sig, len(signatures))
        if len(signatures) == len(set(block.values())):
            return refined
        block = refined


def contract(pointed: PointedModel) -> PointedModel:
    """
    互模拟收缩：按最大自互模拟取商

    每个类用其字典序最小的状态作为代表
    """
    model = pointed.model
    classes = bisimulation_classes(model)
    rep: dict[int, str] = {}
    for s in model.sorted_states:
        rep.setdefault(classes[s], s)
    to_rep = {s: rep[classes[s]] for s in model.states}
    quotient = Model(
        states=frozenset(rep.values()),
        relations={
            agent: {(to_rep[a], to_rep[b]) for a, b in pairs}
            for agent, pairs in model.relations.items()
        },
        valuation={
            p: {to_rep[s] for s in members} for p, members in model.valuation.items()
        },
    )
    return PointedModel(quotient, to_rep[pointed.point])


class DistinguisherTable:
    """
    单个模型内部任意两个非互模拟状态的区分公式

    只计算一次自互模拟不动点，公式按需提取并缓存
    """

    def __init__(self, model: Model):
        self.model = model
        agents = model.agents
        self._fixpoint = _Fixpoint(model, model, agents, agents)
        self._memo: dict[Pair, Formula] = {}

    def bisimilar(self, s: str, t: str) -> bool:
        return (s, t) in self._fixpoint.pairs

    def formula(self, s: str, t: str) -> Formula:
        """在 s 为真、在 t 为假的公式"""
        if self.bisimilar(t, s):
            raise NotDistinguishableError(f"状态 {s} 与 {t} 互模拟，无区分公式")
        return self._fixpoint.distinguisher(t, s, self._memo)


def distinguishing_formula(model: Model, s: str, t: str) -> Formula:
    """
    区分公式：M_s ⊨ φ 且 M_t ⊭ φ

    Raises:
        NotDistinguishableError: s 与 t 互模拟
    """
    return DistinguisherTable(model).formula(s, t)


def generated_submodel(pointed: PointedModel) -> PointedModel:
    """只保留从指定点经任意主体可达的状态"""
    model = pointed.model
    seen = {pointed.point}
    queue = deque([pointed.point])
    while queue:
        s = queue.popleft()
        for agent in model.agents:
            for t in model.successors(agent, s):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    if len(seen) == len(model.states):
        return pointed
    sub = Model(
        states=frozenset(seen),
        relations={
            agent: {(a, b) for a, b in pairs if a in seen}
            for agent, pairs in model.relations.items()
        },
        valuation={p: members & seen for p, members in model.valuation.items()},
    )
    return PointedModel(sub, pointed.point)


def church_rosser_join(pointed: PointedModel, agent: str) -> PointedModel:
    """清空 R_a：同一模型的任意两个 a-精化都被它共同精化"""
    model = pointed.model
    relations = dict(model.relations)
    relations[agent] = frozenset()
    return PointedModel(Model(model.states, relations, model.valuation), pointed.point)


def restricted_blowup(
    source: PointedModel,
    target: PointedModel,
    agents: Iterable[str],
    marker: str | None = None,
) -> tuple[PointedModel, str]:
    """
    把 B-精化看成"膨胀后剪枝"

    构造一个除标记命题外与 source 互模拟的模型：
    精化关系中的每个二元组 (s,t) 成为一个标记为真的状态，
    source 的原状态作为标记为假的副本补齐 B 中主体缺失的后继。
    剪掉指向标记为假状态的箭头（prune_marked）即得到与 target 互模拟的模型。

    Returns:
        (膨胀模型, 标记命题名)

    Raises:
        RefinementFailedError: source ⪰_B target 不成立
    """
    refined = set(agents)
    check = check_refinement(source, target, refined)
    if not check.holds:
        raise RefinementFailedError("目标模型不是源模型的精化，无法膨胀")
    left, right = source.model, target.model
    if marker is None:
        marker = fresh_prop(set(left.props) | set(right.props)).name
    pairs = check.witness.pairs

    def kept(s: str, t: str) -> str:
        return f"k:{s}|{t}"

    def copy(s: str) -> str:
        return f"o:{s}"

    universe = sorted(_universe(left, right, extra=refined))
    states = {kept(s, t) for s, t in pairs} | {copy(s) for s in left.states}
    relations: dict[str, set[Pair]] = {agent: set() for agent in universe}
    for agent in universe:
        for a, b in left.relations.get(agent, ()):
            relations[agent].add((copy(a), copy(b)))
        for s, t in pairs:
            right_succ = right.successors(agent, t)
            for s2 in left.successors(agent, s):
                images = [t2 for t2 in right_succ if (s2, t2) in pairs]
                for t2 in images:
                    relations[agent].add((kept(s, t), kept(s2, t2)))
                if not images:
                    relations[agent].add((kept(s, t), copy(s2)))
    valuation = {
        p: {copy(s) for s in members} | {kept(s, t) for s, t in pairs if s in members}
        for p, members in left.valuation.items()
    }
    valuation[marker] = {kept(s, t) for s, t in pairs}
    blown = Model(frozenset(states), relations, valuation)
    return PointedModel(blown, kept(source.point, target.point)), marker


def prune_marked(pointed: PointedModel, marker: str) -> PointedModel:
    """删除指向 marker 为假状态的箭头，并去掉 marker 本身"""
    model = pointed.model
    keep = model.valuation.get(marker, frozenset())
    relations = {
        agent: {(a, b) for a, b in pairs if b in keep}
        for agent, pairs in model.relations.items()
    }
    valuation = {p: m for p, m in model.valuation.items() if p != marker}
    pruned = PointedModel(Model(model.states, relations, valuation), pointed.point)
    return generated_submodel(pruned)
