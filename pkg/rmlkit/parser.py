"""
公式解析器
基于 Lark 的 LALR 语法，把 ASCII 公式文本转换为语法树
"""

from collections.abc import Iterable

from lark import Lark, Token, Transformer, v_args
from lark.lexer import PatternStr
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
)

from .errors import FormulaSyntaxError
from .syntax import (
    BOTTOM,
    TOP,
    AllRef,
    And,
    BisimAll,
    BisimSome,
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
    formula_agents,
)

# 优先级: ~ > & > | > -> > <-> ；模态与量词与 ~ 同级
FORMULA_GRAMMAR = r"""
?start: iff

?iff: imp
    | iff "<->" imp                 -> iff

?imp: disj
    | disj "->" imp                 -> implies

?disj: conj
     | disj "|" conj                -> or_

?conj: unary
     | conj "&" unary               -> and_

?unary: "~" unary                   -> not_
      | "[" NAME "]" unary          -> box
      | "<" NAME ">" unary          -> diamond
      | ALL_REF unary               -> all_ref
      | SOME_REF unary              -> some_ref
      | ALL_GROUP unary             -> all_group
      | SOME_GROUP unary            -> some_group
      | ALL_EVERY unary             -> all_every
      | SOME_EVERY unary            -> some_every
      | BISIM_ALL unary             -> bisim_all
      | BISIM_SOME unary            -> bisim_some
      | COVER "{" [iff ("," iff)*] "}" -> cover
      | atom

?atom: "top"                        -> top
     | "bottom"                     -> bottom
     | NAME                         -> prop
     | "(" iff ")"

ALL_GROUP.4: /(A|forall)_\{[A-Za-z0-9_,\s]*\}/
SOME_GROUP.4: /(E|exists)_\{[A-Za-z0-9_,\s]*\}/
ALL_REF.3: /(A|forall)_[A-Za-z0-9_]+/
SOME_REF.3: /(E|exists)_[A-Za-z0-9_]+/
BISIM_ALL.3: /BA_[A-Za-z0-9_]+/
BISIM_SOME.3: /BE_[A-Za-z0-9_]+/
COVER.3: /nabla_[A-Za-z0-9_]+/
ALL_EVERY.2: /(A|forall)(?![A-Za-z0-9_])/
SOME_EVERY.2: /(E|exists)(?![A-Za-z0-9_])/

NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

# 终结符 -> 错误提示里的可读写法
_TOKEN_NAMES = {
    "LPAR": "(",
    "RPAR": ")",
    "LSQB": "[",
    "RSQB": "]",
    "LESSTHAN": "<",
    "MORETHAN": ">",
    "LBRACE": "{",
    "RBRACE": "}",
    "COMMA": ",",
    "TILDE": "~",
    "AMPERSAND": "&",
    "VBAR": "|",
    "NAME": "名字",
    "TOP": "top",
    "BOTTOM": "bottom",
    "ALL_REF": "A_<主体>",
    "SOME_REF": "E_<主体>",
    "ALL_GROUP": "A_{主体,...}",
    "SOME_GROUP": "E_{主体,...}",
    "ALL_EVERY": "A",
    "SOME_EVERY": "E",
    "BISIM_ALL": "BA_<命题>",
    "BISIM_SOME": "BE_<命题>",
    "COVER": "nabla_<主体>",
    "$END": "结尾",
}


class _Everyone(Formula):
    """裸 E/A：解析后再按主体全集展开"""

    def __init__(self, universal: bool, sub: Formula):
        self.universal = universal
        self.sub = sub

    def children(self):
        return (self.sub,)

    def _fields(self) -> tuple:
        return (self.universal, self.sub)

    def _render(self) -> str:
        return ("A " if self.universal else "E ") + self.sub.text


def _prefix_suffix(token: Token) -> str:
    return token.value.split("_", 1)[1]


def _group_agents(token: Token) -> list[str]:
    inner = token.value.split("{", 1)[1].rstrip("}")
    return [a.strip() for a in inner.split(",") if a.strip()]


def _stack(ctor, agents: Iterable[str], sub: Formula) -> Formula:
    for agent in reversed(list(agents)):
        sub = ctor(agent, sub)
    return sub


@v_args(inline=True)
class _FormulaBuilder(Transformer):
    """语法树 -> Formula"""

    def top(self):
        return TOP

    def bottom(self):
        return BOTTOM

    def prop(self, name: Token):
        return Prop(name.value)

    def not_(self, sub):
        return Not(sub)

    def and_(self, left, right):
        return And(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def iff(self, left, right):
        return Iff(left, right)

    def box(self, agent: Token, sub):
        return Box(agent.value, sub)

    def diamond(self, agent: Token, sub):
        return Diamond(agent.value, sub)

    def all_ref(self, token: Token, sub):
        return AllRef(_prefix_suffix(token), sub)

    def some_ref(self, token: Token, sub):
        return SomeRef(_prefix_suffix(token), sub)

    def all_group(self, token: Token, sub):
        return _stack(AllRef, _group_agents(token), sub)

    def some_group(self, token: Token, sub):
        return _stack(SomeRef, _group_agents(token), sub)

    def all_every(self, _token: Token, sub):
        return _Everyone(True, sub)

    def some_every(self, _token: Token, sub):
        return _Everyone(False, sub)

    def bisim_all(self, token: Token, sub):
        return BisimAll(_prefix_suffix(token), sub)

    def bisim_some(self, token: Token, sub):
        return BisimSome(_prefix_suffix(token), sub)

    def cover(self, token: Token, *members):
        return Cover(_prefix_suffix(token), tuple(m for m in members if m is not None))


_parser: Lark | None = None


def _get_parser() -> Lark:
    """延迟构建解析器（单例）"""
    global _parser
    if _parser is None:
        _parser = Lark(FORMULA_GRAMMAR, parser="lalr", maybe_placeholders=True)
    return _parser


def _expand_everyone(formula: Formula, agents: list[str]) -> Formula:
    if isinstance(formula, _Everyone):
        body = _expand_everyone(formula.sub, agents)
        return _stack(AllRef if formula.universal else SomeRef, agents, body)
    if not formula.children():
        return formula
    return formula.map_children(lambda c: _expand_everyone(c, agents))


def _has_everyone(formula: Formula) -> bool:
    if isinstance(formula, _Everyone):
        return True
    return any(_has_everyone(c) for c in formula.children())


def _readable(names: Iterable[str]) -> list[str]:
    """终结符名换成可读写法；匿名的字面量终结符取其字面"""
    out = []
    for name in names:
        if name in _TOKEN_NAMES:
            out.append(_TOKEN_NAMES[name])
            continue
        try:
            pattern = _get_parser().get_terminal(name).pattern
        except KeyError:
            out.append(name)
            continue
        out.append(pattern.value if isinstance(pattern, PatternStr) else name)
    return out


def _end_of_input(text: str, expected: Iterable[str]) -> FormulaSyntaxError:
    """输入提前结束：位置取最后一行末尾之后"""
    lines = text.splitlines() or [""]
    return FormulaSyntaxError(text, len(lines), len(lines[-1]) + 1, _readable(expected))


def parse(text: str, agents: Iterable[str] | None = None) -> Formula:
    """
    解析公式文本

    Args:
        text: 公式文本
        agents: 裸 E/A 量化的主体全集；为 None 时取公式中出现的主体

    Returns:
        Formula 语法树

    Raises:
        FormulaSyntaxError: 含行列号与期望的记号集合
    """
    try:
        tree = _get_parser().parse(text)
        formula = _FormulaBuilder().transform(tree)
    except UnexpectedEOF as e:
        raise _end_of_input(text, e.expected) from None
    except UnexpectedToken as e:
        if e.token.type == "$END":
            raise _end_of_input(text, e.expected) from None
        expected = _readable(e.expected)
        raise FormulaSyntaxError(text, e.line, e.column, expected) from None
    except UnexpectedCharacters as e:
        expected = _readable(e.allowed or ())
        raise FormulaSyntaxError(text, e.line, e.column, expected) from None
    except UnexpectedInput as e:
        expected = _readable(getattr(e, "expected", None) or ())
        raise FormulaSyntaxError(text, e.line, e.column, expected) from None

    if _has_everyone(formula):
        universe = sorted(set(agents) if agents is not None else formula_agents(formula))
        formula = _expand_everyone(formula, universe)
    return formula


def formula_lines(lines: Iterable[str]) -> list[str]:
    """批量输入中的公式行：去掉首尾空白，跳过空行与 # 注释"""
    return [
        line.strip()
        for line in lines
        if line.strip() and not line.strip().startswith("#")
    ]
