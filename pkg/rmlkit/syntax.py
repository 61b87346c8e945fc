"""
公式抽象语法
精化模态逻辑 L_∀（含覆盖算子 ∇）与互模拟量化语言的语法树、打印与结构工具

所有结点都是不可变值：结构相等可判定，哈希值缓存，可直接用作备忘表的键。
"""

import re
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, fields
from functools import cached_property

from .config import FRESH_PREFIX

# 打印优先级：数值越大结合越紧
_LEVEL_IFF = 1
_LEVEL_IMPLIES = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_PREFIX = 5
_LEVEL_ATOM = 6

# 被关键字与运算符前缀占用的名字，不能用作命题或主体
RESERVED_WORDS = frozenset({"top", "bottom", "A", "E", "forall", "exists"})
RESERVED_PREFIXES = ("A_", "E_", "forall_", "exists_", "BA_", "BE_", "nabla_")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(name: str) -> bool:
    """name 能否作为命题或主体名写进公式文本并原样读回"""
    return (
        bool(_IDENT_RE.match(name))
        and name not in RESERVED_WORDS
        and not name.startswith(RESERVED_PREFIXES)
    )


class Formula:
    """公式结点基类"""

    level = _LEVEL_ATOM

    def _fields(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    @cached_property
    def _key(self) -> tuple:
        return (type(self).__name__, *self._fields())

    @cached_property
    def _hash(self) -> int:
        return hash(self._key)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self):
            return False
        return self._hash == other._hash and self._key == other._key

    def __str__(self) -> str:
        return self.text

    def children(self) -> tuple["Formula", ...]:
        """直接子公式"""
        return ()

    def map_children(self, fn: Callable[["Formula"], "Formula"]) -> "Formula":
        """对直接子公式逐个应用 fn 后重建结点"""
        return self

    @cached_property
    def text(self) -> str:
        return self._render()

    def _render(self) -> str:
        raise NotImplementedError

    @cached_property
    def size(self) -> int:
        """语法树结点数"""
        return 1 + sum(c.size for c in self.children())

    @cached_property
    def refinement_free(self) -> bool:
        return all(c.refinement_free for c in self.children())


def _wrap(sub: Formula, parens: bool) -> str:
    return f"({sub.text})" if parens else sub.text


# ============================================================
# 原子
# ============================================================


@dataclass(frozen=True, eq=False)
class Prop(Formula):
    """命题变量"""

    name: str

    def _render(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class Top(Formula):
    def _render(self) -> str:
        return "top"


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    def _render(self) -> str:
        return "bottom"


TOP = Top()
BOTTOM = Bottom()


# ============================================================
# 命题连接词
# ============================================================


@dataclass(frozen=True, eq=False)
class Not(Formula):
    sub: Formula

    level = _LEVEL_PREFIX

    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)

    def map_children(self, fn):
        return Not(fn(self.sub))

    def _render(self) -> str:
        return "~" + _wrap(self.sub, self.sub.level < _LEVEL_PREFIX)


@dataclass(frozen=True, eq=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    symbol = "?"
    right_assoc = False

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def map_children(self, fn):
        return type(self)(fn(self.left), fn(self.right))

    def _render(self) -> str:
        if self.right_assoc:
            left_parens = self.left.level <= self.level
            right_parens = self.right.level < self.level
        else:
            left_parens = self.left.level < self.level
            right_parens = self.right.level <= self.level
        return (
            f"{_wrap(self.left, left_parens)} {self.symbol} "
            f"{_wrap(self.right, right_parens)}"
        )


@dataclass(frozen=True, eq=False)
class And(_Binary):
    symbol = "&"
    level = _LEVEL_AND


@dataclass(frozen=True, eq=False)
class Or(_Binary):
    symbol = "|"
    level = _LEVEL_OR


@dataclass(frozen=True, eq=False)
class Implies(_Binary):
    symbol = "->"
    level = _LEVEL_IMPLIES
    right_assoc = True


@dataclass(frozen=True, eq=False)
class Iff(_Binary):
    symbol = "<->"
    level = _LEVEL_IFF


# ============================================================
# 模态与量词
# ============================================================


@dataclass(frozen=True, eq=False)
class _Prefix(Formula):
    """带一个标签（主体名或约束变量）的前缀算子"""

    label: str
    sub: Formula

    level = _LEVEL_PREFIX

    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)

    def map_children(self, fn):
        return type(self)(self.label, fn(self.sub))

    def _head(self) -> str:
        raise NotImplementedError

    def _render(self) -> str:
        return self._head() + _wrap(self.sub, self.sub.level < _LEVEL_PREFIX)

    @property
    def agent(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class Box(_Prefix):
    """□_a φ"""

    def _head(self) -> str:
        return f"[{self.label}]"


@dataclass(frozen=True, eq=False)
class Diamond(_Prefix):
    """◇_a φ"""

    def _head(self) -> str:
        return f"<{self.label}>"


@dataclass(frozen=True, eq=False)
class AllRef(_Prefix):
    """∀_a φ：对所有 a-精化成立"""

    def _head(self) -> str:
        return f"A_{self.label} "

    @cached_property
    def refinement_free(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class SomeRef(_Prefix):
    """∃_a φ：存在 a-精化使之成立"""

    def _head(self) -> str:
        return f"E_{self.label} "

    @cached_property
    def refinement_free(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class BisimAll(_Prefix):
    """∀̃p φ，label 为约束变量"""

    def _head(self) -> str:
        return f"BA_{self.label} "

    @property
    def var(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class BisimSome(_Prefix):
    """∃̃p φ，label 为约束变量"""

    def _head(self) -> str:
        return f"BE_{self.label} "

    @property
    def var(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class Cover(Formula):
    """
    覆盖算子 ∇_a Φ

    每个 a-后继满足 Φ 中某个成员，且 Φ 的每个成员都被某个 a-后继满足。
    成员集合去重并按打印形式排序。
    """

    agent: str
    members: tuple[Formula, ...] = ()

    def __post_init__(self):
        canonical = tuple(sorted(set(self.members), key=lambda f: f.text))
        object.__setattr__(self, "members", canonical)

    def children(self) -> tuple[Formula, ...]:
        return self.members

    def map_children(self, fn):
        return Cover(self.agent, tuple(fn(m) for m in self.members))

    def _render(self) -> str:
        inner = ", ".join(m.text for m in self.members)
        return f"nabla_{self.agent} {{{inner}}}"


QUANTIFIERS = (AllRef, SomeRef)
BISIM_QUANTIFIERS = (BisimAll, BisimSome)


# ============================================================
# 构造辅助
# ============================================================


def conjunction(items: Iterable[Formula]) -> Formula:
    """左结合合取，空合取为 ⊤，重复项只保留一次"""
    result: Formula | None = None
    seen: set[Formula] = set()
    for item in items:
        if item in seen:
            continue
        seen.add(item)
        result = item if result is None else And(result, item)
    return TOP if result is None else result


def disjunction(items: Iterable[Formula]) -> Formula:
    """左结合析取，空析取为 ⊥"""
    result: Formula | None = None
    seen: set[Formula] = set()
    for item in items:
        if item in seen:
            continue
        seen.add(item)
        result = item if result is None else Or(result, item)
    return BOTTOM if result is None else result


def conjuncts(formula: Formula) -> list[Formula]:
    """展开嵌套合取"""
    out: list[Formula] = []
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, And):
            stack.append(f.right)
            stack.append(f.left)
        else:
            out.append(f)
    return out


def disjuncts(formula: Formula) -> list[Formula]:
    """展开嵌套析取"""
    out: list[Formula] = []
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Or):
            stack.append(f.right)
            stack.append(f.left)
        else:
            out.append(f)
    return out


# ============================================================
# 结构工具
# ============================================================


def print_formula(formula: Formula) -> str:
    """确定性的 ASCII 打印，输出可被 parse 读回"""
    return formula.text


def walk(formula: Formula) -> Iterator[Formula]:
    """前序遍历所有子公式（含自身）"""
    stack = [formula]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(f.children()))


def modal_depth(formula: Formula) -> int:
    """模态深度；精化量词与互模拟量词不计入"""
    if isinstance(formula, (Box, Diamond, Cover)):
        return 1 + max((modal_depth(c) for c in formula.children()), default=0)
    return max((modal_depth(c) for c in formula.children()), default=0)


def quantifier_count(formula: Formula) -> int:
    """精化量词个数"""
    return sum(1 for f in walk(formula) if isinstance(f, QUANTIFIERS))


def free_props(formula: Formula) -> frozenset[str]:
    """自由命题变量"""
    if isinstance(formula, Prop):
        return frozenset({formula.name})
    if isinstance(formula, BISIM_QUANTIFIERS):
        return free_props(formula.sub) - {formula.var}
    out: set[str] = set()
    for c in formula.children():
        out |= free_props(c)
    return frozenset(out)


def all_props(formula: Formula) -> frozenset[str]:
    """出现的所有命题名，包括约束变量"""
    out: set[str] = set()
    for f in walk(formula):
        if isinstance(f, Prop):
            out.add(f.name)
        elif isinstance(f, BISIM_QUANTIFIERS):
            out.add(f.var)
    return frozenset(out)


def bound_vars(formula: Formula) -> frozenset[str]:
    return frozenset(f.var for f in walk(formula) if isinstance(f, BISIM_QUANTIFIERS))


def formula_agents(formula: Formula) -> frozenset[str]:
    """公式中出现的主体"""
    out: set[str] = set()
    for f in walk(formula):
        if isinstance(f, (Box, Diamond, AllRef, SomeRef)):
            out.add(f.agent)
        elif isinstance(f, Cover):
            out.add(f.agent)
    return frozenset(out)


def fresh_prop(avoid: Iterable[str]) -> Prop:
    """
    生成不在 avoid 中的新命题变量

    按 _v0, _v1, ... 顺序取第一个未被占用的名字
    """
    taken = set(avoid)
    index = 0
    while f"{FRESH_PREFIX}{index}" in taken:
        index += 1
    return Prop(f"{FRESH_PREFIX}{index}")


def substitute(formula: Formula, prop: str, replacement: Formula) -> Formula:
    """
    φ[ψ\\p]：把 p 的每个自由出现替换为 ψ

    互模拟量词重新约束 p 时不再向内替换
    """
    if isinstance(formula, Prop):
        return replacement if formula.name == prop else formula
    if isinstance(formula, BISIM_QUANTIFIERS) and formula.var == prop:
        return formula
    if not formula.children():
        return formula
    return formula.map_children(lambda c: substitute(c, prop, replacement))


def to_nnf(formula: Formula) -> Formula:
    """
    否定范式

    否定只作用在命题变量上，消去 → 与 ↔；
    覆盖算子内部成员也转为否定范式，否定的覆盖展开为 ◇⋀¬φ ∨ ⋁□¬φ。
    """
    return _nnf(formula, False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Prop):
        return Not(f) if negate else f
    if isinstance(f, Top):
        return BOTTOM if negate else TOP
    if isinstance(f, Bottom):
        return TOP if negate else BOTTOM
    if isinstance(f, Not):
        return _nnf(f.sub, not negate)
    if isinstance(f, And):
        ctor = Or if negate else And
        return ctor(_nnf(f.left, negate), _nnf(f.right, negate))
    if isinstance(f, Or):
        ctor = And if negate else Or
        return ctor(_nnf(f.left, negate), _nnf(f.right, negate))
    if isinstance(f, Implies):
        if negate:
            return And(_nnf(f.left, False), _nnf(f.right, True))
        return Or(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        if negate:
            return Or(
                And(_nnf(f.left, False), _nnf(f.right, True)),
                And(_nnf(f.left, True), _nnf(f.right, False)),
            )
        return Or(
            And(_nnf(f.left, False), _nnf(f.right, False)),
            And(_nnf(f.left, True), _nnf(f.right, True)),
        )
    if isinstance(f, Cover):
        if not negate:
            return Cover(f.agent, tuple(_nnf(m, False) for m in f.members))
        negated = [_nnf(m, True) for m in f.members]
        return disjunction(
            [Diamond(f.agent, conjunction(negated))]
            + [Box(f.agent, m) for m in negated]
        )
    duals = {
        Box: Diamond,
        Diamond: Box,
        AllRef: SomeRef,
        SomeRef: AllRef,
        BisimAll: BisimSome,
        BisimSome: BisimAll,
    }
    ctor = duals[type(f)] if negate else type(f)
    return ctor(f.label, _nnf(f.sub, negate))


def expand_covers(formula: Formula) -> Formula:
    """把 ∇_aΦ 展开为 □_a⋁Φ ∧ ⋀_{φ∈Φ}◇_aφ"""
    if isinstance(formula, Cover):
        members = [expand_covers(m) for m in formula.members]
        return conjunction(
            [Box(formula.agent, disjunction(members))]
            + [Diamond(formula.agent, m) for m in members]
        )
    if not formula.children():
        return formula
    return formula.map_children(expand_covers)


def require_refinement_free(formula: Formula, what: str = "公式") -> None:
    """不含精化量词，否则抛出 RefinementQuantifierError"""
    if not formula.refinement_free:
        from .errors import RefinementQuantifierError

        raise RefinementQuantifierError(f"{what}不能包含精化量词: {formula.text}")
