"""
精化模态逻辑工作台异常定义
库代码只抛出这里的异常，由插件命令或命令行入口统一转换为提示/退出码
"""


class RMLError(Exception):
    """工作台异常基类"""

    pass


class FormulaSyntaxError(RMLError):
    """公式语法错误"""

    def __init__(
        self, text: str, line: int, column: int, expected: list[str] | None = None
    ):
        self.text = text
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])
        hint = f"，期望: {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"公式语法错误 (第{line}行第{column}列){hint}")


class ModelValidationError(RMLError):
    """模型不满足不变式"""

    pass


class InputFormatError(RMLError):
    """输入文件格式错误"""

    pass


class RefinementQuantifierError(RMLError):
    """此处要求不含精化量词的公式"""

    pass


class BudgetExceededError(RMLError):
    """归约结点数超出预算"""

    def __init__(self, limit: int, size: int):
        self.limit = limit
        self.size = size
        super().__init__(f"归约规模 {size} 超出结点预算 {limit}")


class NotDistinguishableError(RMLError):
    """两个状态互模拟，不存在区分公式"""

    pass


class RelationMismatchError(RMLError):
    """关系或覆盖算子的参数不匹配"""

    pass


class ProductUndefinedError(RMLError):
    """动作前提在当前点不成立，乘积无定义"""

    pass


class RefinementFailedError(RMLError):
    """精化关系不成立"""

    pass


class EnumerationLimitError(RMLError):
    """枚举搜索空间超过上限"""

    pass


class RelativizationPreconditionError(RMLError):
    """相对化交换性检查的前提不满足"""

    pass
