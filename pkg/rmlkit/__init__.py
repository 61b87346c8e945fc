"""
rmlkit：精化模态逻辑工作台

多主体 Kripke 模型上的精化检查、精化量词归约、可满足性判定、
见证构造、认知动作以及到互模拟量化逻辑的翻译
"""

__version__ = "1.0.0"

from .actions import (
    product,
    public_announcement,
    synthesize_action,
    trivial_action,
    verify_product_is_refinement,
)
from .bq import alpha_normalize, check_relativization_commutes, relativize, translate
from .decision import k_satisfiable, rml_equivalent, rml_satisfiable, rml_valid
from .errors import (
    BudgetExceededError,
    FormulaSyntaxError,
    InputFormatError,
    ModelValidationError,
    RMLError,
)
from .kripke import (
    check_bisimulation,
    check_refinement,
    check_witness,
    compose_refinements,
    contract,
    distinguishing_formula,
    generated_submodel,
    validate,
)
from .modelcheck import enumerate_refinements, evaluate, evaluate_rml
from .models import ActionModel, Model, PointedActionModel, PointedModel, StateRelation
from .normal_forms import simplify, to_disjunctive
from .parser import parse
from .reduction import eliminate_innermost, reduce, synthesize_group_witness, synthesize_witness
from .syntax import Formula, fresh_prop, print_formula, substitute, to_nnf

__all__ = [
    "ActionModel",
    "BudgetExceededError",
    "Formula",
    "FormulaSyntaxError",
    "InputFormatError",
    "Model",
    "ModelValidationError",
    "PointedActionModel",
    "PointedModel",
    "RMLError",
    "StateRelation",
    "alpha_normalize",
    "check_bisimulation",
    "check_refinement",
    "check_relativization_commutes",
    "check_witness",
    "compose_refinements",
    "contract",
    "distinguishing_formula",
    "eliminate_innermost",
    "enumerate_refinements",
    "evaluate",
    "evaluate_rml",
    "fresh_prop",
    "generated_submodel",
    "k_satisfiable",
    "parse",
    "print_formula",
    "product",
    "public_announcement",
    "reduce",
    "relativize",
    "rml_equivalent",
    "rml_satisfiable",
    "rml_valid",
    "simplify",
    "substitute",
    "synthesize_action",
    "synthesize_group_witness",
    "synthesize_witness",
    "to_disjunctive",
    "to_nnf",
    "translate",
    "trivial_action",
    "validate",
    "verify_product_is_refinement",
]
