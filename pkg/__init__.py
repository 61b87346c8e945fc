# AstrBot 精化模态逻辑工作台插件
# 计算部分见 rmlkit 子包

__version__ = "1.0.0"
__author__ = "rmlkit"
