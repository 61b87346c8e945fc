"""
日志入口
插件内运行时使用 AstrBot 的 logger，独立运行（命令行/测试）时退回标准 logging
"""

try:
    from astrbot.api import logger

    ASTRBOT_AVAILABLE = True
except ImportError:
    import logging

    ASTRBOT_AVAILABLE = False
    logger = logging.getLogger("rmlkit")
    logger.addHandler(logging.NullHandler())


def set_verbose(verbose: bool) -> None:
    """命令行 -v 开关；在 AstrBot 内由框架统一控制级别，这里不做处理"""
    if ASTRBOT_AVAILABLE:
        return
    import logging

    if not any(not isinstance(h, logging.NullHandler) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


__all__ = ["logger", "set_verbose", "ASTRBOT_AVAILABLE"]
