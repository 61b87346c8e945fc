"""
工作台配置常量
"""

import os

from .log import logger

# 归约过程中允许的最大公式结点数
DEFAULT_MAX_NODES = 1_000_000
# 覆盖默认预算的环境变量
MAX_NODES_ENV = "RMLKIT_MAX_NODES"

# 新命题变量前缀：_v0, _v1, ...
FRESH_PREFIX = "_v"

# 精化枚举默认参数
DEFAULT_ENUM_DEPTH = 1
DEFAULT_ENUM_DUP = 1
DEFAULT_ENUM_MAX = 100
# 可剪枝箭头数上限（子集数为 2^n）
MAX_PRUNABLE_ARROWS = 16

# 聊天命令超时时间（秒）
DEFAULT_TIMEOUT = 60


def resolve_max_nodes(explicit: int | None = None) -> int:
    """
    确定本次调用的结点预算

    优先级：显式参数 > 环境变量 > 默认值
    """
    if explicit is not None:
        return explicit
    raw = os.environ.get(MAX_NODES_ENV)
    if raw:
        try:
            value = int(raw)
            if value > 0:
                return value
        except ValueError:
            pass
        logger.warning(f"环境变量 {MAX_NODES_ENV}={raw!r} 无效，使用默认预算")
    return DEFAULT_MAX_NODES
