"""
覆盖算子代数与析取范式
把不含精化量词的模态公式化为 φ0 ∧ ⋀_b ∇_b Φ^b 的析取，成员递归地也是析取范式
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

from .errors import BudgetExceededError, RefinementQuantifierError, RelationMismatchError
from .syntax import (
    BOTTOM,
    TOP,
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
    conjunction,
    conjuncts,
    disjunction,
    disjuncts,
    require_refinement_free,
    to_nnf,
    walk,
)

Literal = tuple[str, bool]  # (命题名, 是否为正)


# ============================================================
# 数据结构
# ============================================================


@dataclass(frozen=True)
class DfConjunct:
    """析取范式中的一个合取支：文字集合 ∧ 每个主体至多一个覆盖"""

    literals: frozenset[Literal]
    covers: tuple[tuple[str, tuple["DisjunctiveForm", ...]], ...] = ()

    @cached_property
    def formula(self) -> Formula:
        parts: list[Formula] = [
            Prop(p) if positive else Not(Prop(p)) for p, positive in sorted(self.literals)
        ]
        parts += [
            Cover(agent, tuple(m.formula for m in members))
            for agent, members in self.covers
        ]
        return conjunction(parts)

    @property
    def propositional(self) -> Formula:
        """φ0"""
        return conjunction(
            Prop(p) if positive else Not(Prop(p)) for p, positive in sorted(self.literals)
        )


@dataclass(frozen=True)
class DisjunctiveForm:
    """合取支的析取；空析取即 ⊥"""

    conjuncts: tuple[DfConjunct, ...]

    @cached_property
    def formula(self) -> Formula:
        return disjunction(c.formula for c in self.conjuncts)


def _sorted_unique(items, key):
    seen = {}
    for item in items:
        seen.setdefault(item, None)
    return tuple(sorted(seen, key=key))


# ============================================================
# 覆盖算子
# ============================================================


def box_diamond_to_cover(formula: Formula) -> Formula:
    """□_aψ ↦ ∇_a∅ ∨ ∇_a{ψ}，◇_aψ ↦ ∇_a{ψ, ⊤}"""
    require_refinement_free(formula)
    return _to_cover(formula)


def _to_cover(f: Formula) -> Formula:
    if isinstance(f, Box):
        body = _to_cover(f.sub)
        return Or(Cover(f.agent, ()), Cover(f.agent, (body,)))
    if isinstance(f, Diamond):
        return Cover(f.agent, (_to_cover(f.sub), TOP))
    if not f.children():
        return f
    return f.map_children(_to_cover)


def _merge_members(
    first: tuple[Formula, ...], second: tuple[Formula, ...]
) -> tuple[Formula, ...]:
    any_first = disjunction(first)
    any_second = disjunction(second)
    return tuple(And(phi, any_second) for phi in first) + tuple(
        And(any_first, psi) for psi in second
    )


def merge_covers(first: Cover, second: Cover) -> Cover:
    """
    ∇_aΦ ∧ ∇_aΨ ≡ ∇_a({φ∧⋁Ψ | φ∈Φ} ∪ {⋁Φ∧ψ | ψ∈Ψ})

    成员不做化简；⋁∅ 为 ⊥。

    Raises:
        RelationMismatchError: 两个覆盖的主体不同
    """
    if first.agent != second.agent:
        raise RelationMismatchError(
            f"覆盖主体不同: {first.agent} 与 {second.agent}"
        )
    return Cover(first.agent, _merge_members(first.members, second.members))


# ============================================================
# 化简
# ============================================================


def simplify(formula: Formula) -> Formula:
    """
    保持等价的清理：常量折叠、∧/∨ 的幂等与吸收、互补文字，
    含 ⊥ 成员的覆盖整体为 ⊥，□⊤ 为 ⊤，◇⊥ 为 ⊥
    """
    return _simplify(formula)


@lru_cache(maxsize=65536)
def _simplify(f: Formula) -> Formula:
    if not f.children():
        return f
    if isinstance(f, Not):
        sub = _simplify(f.sub)
        if isinstance(sub, Top):
            return BOTTOM
        if isinstance(sub, Bottom):
            return TOP
        if isinstance(sub, Not):
            return sub.sub
        return Not(sub)
    if isinstance(f, And):
        return _simplify_junction(
            [_simplify(c) for c in conjuncts(f)], conjunctive=True
        )
    if isinstance(f, Or):
        return _simplify_junction(
            [_simplify(c) for c in disjuncts(f)], conjunctive=False
        )
    if isinstance(f, Implies):
        left, right = _simplify(f.left), _simplify(f.right)
        if isinstance(left, Bottom) or isinstance(right, Top) or left == right:
            return TOP
        if isinstance(left, Top):
            return right
        if isinstance(right, Bottom):
            return _simplify(Not(left))
        return Implies(left, right)
    if isinstance(f, Iff):
        left, right = _simplify(f.left), _simplify(f.right)
        if left == right:
            return TOP
        for a, b in ((left, right), (right, left)):
            if isinstance(a, Top):
                return b
            if isinstance(a, Bottom):
                return _simplify(Not(b))
        return Iff(left, right)
    if isinstance(f, Box):
        sub = _simplify(f.sub)
        return TOP if isinstance(sub, Top) else Box(f.agent, sub)
    if isinstance(f, Diamond):
        sub = _simplify(f.sub)
        return BOTTOM if isinstance(sub, Bottom) else Diamond(f.agent, sub)
    if isinstance(f, Cover):
        members = tuple(_simplify(m) for m in f.members)
        if any(isinstance(m, Bottom) for m in members):
            return BOTTOM
        return Cover(f.agent, members)
    if isinstance(f, (AllRef, SomeRef)):
        sub = _simplify(f.sub)
        if isinstance(sub, (Top, Bottom)):
            return sub
        return type(f)(f.agent, sub)
    return f.map_children(_simplify)


def _simplify_junction(items: list[Formula], conjunctive: bool) -> Formula:
    unit, zero = (Top, Bottom) if conjunctive else (Bottom, Top)
    inner = Or if conjunctive else And
    split = conjuncts if conjunctive else disjuncts

    flat: list[Formula] = []
    for item in items:
        flat.extend(split(item))
    kept: list[Formula] = []
    seen: set[Formula] = set()
    for item in flat:
        if isinstance(item, zero):
            return item
        if isinstance(item, unit) or item in seen:
            continue
        seen.add(item)
        kept.append(item)
    for item in kept:
        if Not(item) in seen:
            return TOP if not conjunctive else BOTTOM

    # 吸收：x ∧ (x ∨ y) = x，x ∨ (x ∧ y) = x
    result: list[Formula] = []
    for item in kept:
        if isinstance(item, inner):
            parts = set(disjuncts(item) if conjunctive else conjuncts(item))
            if parts & (seen - {item}):
                continue
        result.append(item)

    # ◇_a⊤ 被任意 ◇_aψ 蕴含；□_a⊥ 蕴含任意 □_aψ
    if conjunctive:
        result = [
            f
            for f in result
            if not (
                isinstance(f, Diamond)
                and isinstance(f.sub, Top)
                and any(isinstance(g, Diamond) and g.agent == f.agent and g is not f for g in result)
            )
        ]
        return conjunction(result)
    result = [
        f
        for f in result
        if not (
            isinstance(f, Box)
            and isinstance(f.sub, Bottom)
            and any(isinstance(g, Box) and g.agent == f.agent and g is not f for g in result)
        )
    ]
    return disjunction(result)


# ============================================================
# 析取范式
# ============================================================

_RawConjunct = tuple[frozenset[Literal], tuple[Formula, ...]]


def _consistent(literals: frozenset[Literal]) -> bool:
    return not any((p, not positive) in literals for p, positive in literals)


class _Converter:
    """单次转换的上下文：备忘表与合取支数上限"""

    def __init__(self, max_conjuncts: int | None):
        self.max_conjuncts = max_conjuncts
        self.memo: dict[Formula, DisjunctiveForm] = {}

    def _check(self, count: int) -> None:
        if self.max_conjuncts is not None and count > self.max_conjuncts:
            raise BudgetExceededError(self.max_conjuncts, count)

    def raw_dnf(self, f: Formula) -> list[_RawConjunct]:
        """命题层 DNF，模态子公式视为原子"""
        if isinstance(f, Prop):
            return [(frozenset({(f.name, True)}), ())]
        if isinstance(f, Not):
            return [(frozenset({(f.sub.name, False)}), ())]
        if isinstance(f, Top):
            return [(frozenset(), ())]
        if isinstance(f, Bottom):
            return []
        if isinstance(f, (Box, Diamond, Cover)):
            return [(frozenset(), (f,))]
        if isinstance(f, Or):
            out = self.raw_dnf(f.left) + self.raw_dnf(f.right)
            self._check(len(out))
            return out
        if isinstance(f, And):
            out = []
            for (l1, m1), (l2, m2) in product(self.raw_dnf(f.left), self.raw_dnf(f.right)):
                literals = l1 | l2
                if _consistent(literals):
                    out.append((literals, m1 + m2))
            self._check(len(out))
            return out
        raise RefinementQuantifierError(f"析取范式不支持: {f.text}")

    def agent_alternatives(self, atoms: list[Formula]) -> list[tuple[Formula, ...]]:
        """单个主体的模态原子合取 -> 覆盖成员集合的若干备选（析取）"""
        boxes = [f.sub for f in atoms if isinstance(f, Box)]
        diamonds = [f.sub for f in atoms if isinstance(f, Diamond)]
        covers = [f.members for f in atoms if isinstance(f, Cover)]

        alternatives: list[tuple[Formula, ...] | None]
        if boxes or diamonds:
            common = conjunction(boxes)
            if diamonds:
                if boxes:
                    members = tuple(And(b, common) for b in diamonds) + (common,)
                else:
                    members = tuple(diamonds) + (TOP,)
                alternatives = [members]
            else:
                alternatives = [(), (common,)]
        else:
            alternatives = [None]
        for members in covers:
            alternatives = [
                members if alt is None else _merge_members(alt, members)
                for alt in alternatives
            ]
        return [alt for alt in alternatives if alt is not None]

    def convert(self, f: Formula) -> DisjunctiveForm:
        if f in self.memo:
            return self.memo[f]
        result: list[DfConjunct] = []
        for literals, atoms in self.raw_dnf(f):
            by_agent: dict[str, list[Formula]] = {}
            for atom in atoms:
                by_agent.setdefault(atom.agent, []).append(atom)
            agents = sorted(by_agent)
            options = [self.agent_alternatives(by_agent[a]) for a in agents]
            for choice in product(*options):
                conjunct = self._build(literals, agents, choice)
                if conjunct is not None:
                    result.append(conjunct)
            self._check(len(result))
        df = DisjunctiveForm(_sorted_unique(result, key=lambda c: c.formula.text))
        self.memo[f] = df
        return df

    def _build(
        self,
        literals: frozenset[Literal],
        agents: list[str],
        choice: tuple[tuple[Formula, ...], ...],
    ) -> DfConjunct | None:
        covers = []
        for agent, members in zip(agents, choice):
            member_dfs = []
            for member in members:
                df = self.convert(to_nnf(member))
                if not df.conjuncts:
                    # 成员为 ⊥ 的覆盖不可满足
                    return None
                member_dfs.append(df)
            covers.append(
                (agent, _sorted_unique(member_dfs, key=lambda d: d.formula.text))
            )
        return DfConjunct(literals, tuple(covers))


def to_disjunctive(formula: Formula, max_conjuncts: int | None = None) -> DisjunctiveForm:
    """
    转换为等价的析取范式

    先取否定范式，在每一层对模态子公式作命题 DNF；
    同一主体的 □α_i 与 ◇β_j 合并为一个覆盖（只有 □ 时产生 ∇∅ ∨ ∇{A} 并向外分配），
    已有的覆盖用 merge_covers 的规则合并，成员递归转换。

    Args:
        formula: 不含精化量词的公式
        max_conjuncts: 任一层合取支数的上限，None 表示不限

    Raises:
        RefinementQuantifierError: 含精化量词
        BudgetExceededError: 合取支数超过上限
    """
    require_refinement_free(formula)
    if any(isinstance(f, (BisimAll, BisimSome)) for f in walk(formula)):
        raise RefinementQuantifierError(f"析取范式不支持互模拟量词: {formula.text}")
    return _Converter(max_conjuncts).convert(to_nnf(formula))


def is_disjunctive(formula: Formula) -> bool:
    """检查公式是否符合析取范式文法"""
    if isinstance(formula, Bottom):
        return True
    for disjunct in disjuncts(formula):
        agents_seen: set[str] = set()
        for part in conjuncts(disjunct):
            if isinstance(part, (Prop, Top)):
                continue
            if isinstance(part, Not) and isinstance(part.sub, Prop):
                continue
            if isinstance(part, Cover):
                if part.agent in agents_seen:
                    return False
                agents_seen.add(part.agent)
                if not all(is_disjunctive(m) for m in part.members):
                    return False
                continue
            return False
    return True
