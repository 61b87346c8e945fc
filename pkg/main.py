"""
AstrBot 精化模态逻辑工作台插件
在聊天中解析公式、设置 Kripke 模型、做模型检查、消去精化量词、判定有效性并构造精化见证
计算由 rmlkit 库完成，插件只负责命令解析、用户设置与回复格式
"""

import asyncio
import json
from pathlib import Path
from typing import Any

from astrbot.api import logger
from astrbot.api.event import AstrMessageEvent, filter
from astrbot.api.star import Context, Star, StarTools, register

from .rmlkit.config import DEFAULT_TIMEOUT
from .rmlkit.decision import rml_satisfiable, rml_valid
from .rmlkit.errors import BudgetExceededError, FormulaSyntaxError, RMLError
from .rmlkit.gallery import GALLERY
from .rmlkit.io import dumps, model_from_dict, model_to_dict
from .rmlkit.modelcheck import evaluate_rml
from .rmlkit.models import PointedModel
from .rmlkit.parser import parse
from .rmlkit.reduction import reduce, synthesize_group_witness, synthesize_witness
from .rmlkit.render import model_to_dot
from .rmlkit.syntax import formula_agents, modal_depth

# 回复中最多展示的归约步骤数
MAX_TRACE_LINES = 12
# 未设置模型时使用的示例
DEFAULT_MODEL = "p_uncertainty"


@register(
    "astrbot_plugin_rmlkit",
    "rmlkit",
    "精化模态逻辑工作台 - 精化量词的模型检查、归约与判定",
    "1.0.0",
)
class RMLWorkbenchPlugin(Star):
    """精化模态逻辑插件主类"""

    # 用户设置文件名
    SETTINGS_FILE = "user_settings.json"

    def __init__(self, context: Context):
        super().__init__(context)
        # 获取插件数据目录
        self._data_dir = Path(StarTools.get_data_dir("rmlkit"))
        self._data_dir.mkdir(parents=True, exist_ok=True)
        # 加载用户设置：user_id -> {"model": 模型 JSON}
        self.user_settings: dict[str, dict[str, Any]] = self._load_user_settings()
        logger.info("精化模态逻辑插件已加载")

    def _load_user_settings(self) -> dict[str, dict[str, Any]]:
        """从文件加载用户设置"""
        settings_path = self._data_dir / self.SETTINGS_FILE
        if settings_path.exists():
            try:
                with open(settings_path, encoding="utf-8") as f:
                    return json.load(f)
            except Exception as e:
                logger.warning(f"加载用户设置失败: {e}")
        return {}

    def _save_user_settings(self):
        """保存用户设置到文件"""
        settings_path = self._data_dir / self.SETTINGS_FILE
        try:
            with open(settings_path, "w", encoding="utf-8") as f:
                json.dump(self.user_settings, f, ensure_ascii=False, indent=2)
        except Exception as e:
            logger.warning(f"保存用户设置失败: {e}")

    def _get_user_model(self, user_id: str) -> PointedModel:
        """获取用户当前的点模型；未设置或已损坏时退回默认示例"""
        data = self.user_settings.get(user_id, {}).get("model")
        if data is not None:
            try:
                return model_from_dict(data)
            except RMLError as e:
                logger.warning(f"用户 {user_id} 保存的模型无效: {e}")
        return GALLERY[DEFAULT_MODEL]()

    @staticmethod
    def _command_tail(event: AstrMessageEvent, command: str, fallback: str) -> str:
        """取命令名之后的完整文本（公式和 JSON 中含空格）"""
        text = (getattr(event, "message_str", "") or "").strip().lstrip("/")
        if text.startswith(command):
            return text[len(command):].strip()
        return fallback.strip()

    @staticmethod
    async def _run(fn, *args):
        """在线程中运行库函数并限制时间"""
        return await asyncio.wait_for(asyncio.to_thread(fn, *args), DEFAULT_TIMEOUT)

    def _parse_for(self, text: str, model: PointedModel | None = None):
        """裸 E/A 的主体全集取公式与模型中出现的主体"""
        agents = set(formula_agents(parse(text)))
        if model is not None:
            agents |= set(model.model.agents)
        return parse(text, agents=agents)

    @staticmethod
    def _format_error(e: Exception) -> str:
        if isinstance(e, FormulaSyntaxError):
            return f"❌ 公式语法错误\n{e}"
        if isinstance(e, BudgetExceededError):
            return f"⚠️ 公式规模超出预算\n{e}\n💡 请尝试更短的公式"
        return f"❌ {e}"

    # ============================================================
    # 命令
    # ============================================================

    @filter.command("模态解析")
    async def parse_formula(self, event: AstrMessageEvent, formula: str = ""):
        """
        解析公式并规范打印
        用法: 模态解析 公式
        示例: 模态解析 E_a ([a]p | [a]~p)
        """
        text = self._command_tail(event, "模态解析", formula)
        if not text:
            yield event.plain_result("💡 用法: 模态解析 公式\n示例: 模态解析 E_a ([a]p | [a]~p)")
            return
        try:
            f = self._parse_for(text)
            yield event.plain_result(
                f"✅ 解析成功\n"
                f"📝 {f.text}\n"
                f"📏 结点数: {f.size}  模态深度: {modal_depth(f)}"
            )
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except Exception as e:
            logger.error(f"解析公式出错: {e}")
            yield event.plain_result(f"❌ 解析失败: {str(e)}")

    @filter.command("设置模型")
    async def set_model(self, event: AstrMessageEvent, model: str = ""):
        """
        设置当前点模型
        用法: 设置模型 示例名 或 设置模型 {模型 JSON}
        """
        text = self._command_tail(event, "设置模型", model)
        if not text:
            names = "、".join(GALLERY)
            yield event.plain_result(
                "💡 用法: 设置模型 示例名 或 设置模型 {模型 JSON}\n"
                f"📚 可用示例: {names}\n"
                '示例: 设置模型 {"states": ["0","1"], "point": "1", '
                '"valuation": {"p": ["1"]}, "relations": {"a": [["1","0"]]}}'
            )
            return
        try:
            if text in GALLERY:
                pointed = GALLERY[text]()
            else:
                pointed = model_from_dict(json.loads(text))
            user_id = event.get_sender_id()
            self.user_settings.setdefault(user_id, {})["model"] = model_to_dict(pointed)
            self._save_user_settings()  # 持久化保存
            m = pointed.model
            yield event.plain_result(
                f"✅ 已设置当前模型\n"
                f"🔹 状态: {len(m.states)} 个  主体: {', '.join(m.agents) or '无'}\n"
                f"🔹 命题: {', '.join(m.props) or '无'}  指定点: {pointed.point}"
            )
        except json.JSONDecodeError as e:
            yield event.plain_result(f"❌ JSON 格式错误: {e}")
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except Exception as e:
            logger.error(f"设置模型出错: {e}")
            yield event.plain_result(f"❌ 设置失败: {str(e)}")

    @filter.command("当前模型")
    async def show_model(self, event: AstrMessageEvent):
        """显示当前点模型的 JSON"""
        pointed = self._get_user_model(event.get_sender_id())
        yield event.plain_result(f"📊 当前模型\n{dumps(model_to_dict(pointed))}")

    @filter.command("模型导出")
    async def export_model(self, event: AstrMessageEvent):
        """导出当前模型的 Graphviz DOT 文本"""
        try:
            pointed = self._get_user_model(event.get_sender_id())
            yield event.plain_result(model_to_dot(pointed))
        except Exception as e:
            logger.error(f"导出模型出错: {e}")
            yield event.plain_result(f"❌ 导出失败: {str(e)}")

    @filter.command("模态检查")
    async def check_formula(self, event: AstrMessageEvent, formula: str = ""):
        """
        在当前模型的指定点上求值
        用法: 模态检查 公式
        示例: 模态检查 E (<a>p & [a]p & ~[b][a]p)
        """
        text = self._command_tail(event, "模态检查", formula)
        if not text:
            yield event.plain_result("💡 用法: 模态检查 公式")
            return
        try:
            pointed = self._get_user_model(event.get_sender_id())
            f = self._parse_for(text, pointed)
            value = await self._run(evaluate_rml, pointed, f)
            mark = "✅ 成立" if value else "❌ 不成立"
            yield event.plain_result(f"{mark}\n📝 {f.text}\n📍 指定点: {pointed.point}")
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except asyncio.TimeoutError:
            yield event.plain_result("⏰ 计算超时\n💡 请尝试更短的公式")
        except Exception as e:
            logger.error(f"模型检查出错: {e}")
            yield event.plain_result(f"❌ 检查失败: {str(e)}")

    @filter.command("模态归约")
    async def reduce_formula(self, event: AstrMessageEvent, formula: str = ""):
        """
        把含精化量词的公式归约为普通模态公式
        用法: 模态归约 公式
        示例: 模态归约 E_a <a>p
        """
        text = self._command_tail(event, "模态归约", formula)
        if not text:
            yield event.plain_result("💡 用法: 模态归约 公式\n示例: 模态归约 E_a <a>p")
            return
        try:
            f = self._parse_for(text)
            reduced, trace = await self._run(reduce, f)
            lines = [f"✅ 归约结果\n📝 {reduced.text}", f"🔁 共 {len(trace)} 步改写"]
            for step in trace.steps[:MAX_TRACE_LINES]:
                lines.append(f"  • {step.rule}: {step.before.text} ⇒ {step.after.text}")
            if len(trace) > MAX_TRACE_LINES:
                lines.append(f"  … 其余 {len(trace) - MAX_TRACE_LINES} 步省略")
            yield event.plain_result("\n".join(lines))
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except asyncio.TimeoutError:
            yield event.plain_result("⏰ 归约超时\n💡 请尝试更短的公式")
        except Exception as e:
            logger.error(f"归约出错: {e}")
            yield event.plain_result(f"❌ 归约失败: {str(e)}")

    @filter.command("模态有效")
    async def check_valid(self, event: AstrMessageEvent, formula: str = ""):
        """
        判定公式是否有效，无效时给出反模型
        用法: 模态有效 公式
        示例: 模态有效 <a>top -> E_a ([a]p | [a]~p)
        """
        text = self._command_tail(event, "模态有效", formula)
        if not text:
            yield event.plain_result("💡 用法: 模态有效 公式")
            return
        try:
            f = self._parse_for(text)
            result = await self._run(rml_valid, f)
            if result.valid:
                yield event.plain_result(f"✅ 有效\n📝 {f.text}")
            else:
                yield event.plain_result(
                    f"❌ 无效\n📝 {f.text}\n🔍 反模型:\n"
                    f"{dumps(model_to_dict(result.countermodel))}"
                )
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except asyncio.TimeoutError:
            yield event.plain_result("⏰ 判定超时\n💡 请尝试更短的公式")
        except Exception as e:
            logger.error(f"有效性判定出错: {e}")
            yield event.plain_result(f"❌ 判定失败: {str(e)}")

    @filter.command("模态可满足")
    async def check_sat(self, event: AstrMessageEvent, formula: str = ""):
        """
        判定公式是否可满足，可满足时给出模型
        用法: 模态可满足 公式
        """
        text = self._command_tail(event, "模态可满足", formula)
        if not text:
            yield event.plain_result("💡 用法: 模态可满足 公式")
            return
        try:
            f = self._parse_for(text)
            verdict = await self._run(rml_satisfiable, f)
            if verdict.satisfiable:
                yield event.plain_result(
                    f"✅ 可满足\n📝 {f.text}\n📊 模型:\n{dumps(model_to_dict(verdict.model))}"
                )
            else:
                yield event.plain_result(f"❌ 不可满足\n📝 {f.text}")
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except asyncio.TimeoutError:
            yield event.plain_result("⏰ 判定超时\n💡 请尝试更短的公式")
        except Exception as e:
            logger.error(f"可满足性判定出错: {e}")
            yield event.plain_result(f"❌ 判定失败: {str(e)}")

    @filter.command("精化见证")
    async def refinement_witness(self, event: AstrMessageEvent, agent: str = ""):
        """
        在当前模型上构造满足公式的精化
        用法: 精化见证 主体[,主体...] 公式
        示例: 精化见证 a,b [a]p & ~[b][a]p
        """
        text = self._command_tail(event, "精化见证", agent)
        agent_part, _, formula_text = text.partition(" ")
        if not agent_part or not formula_text.strip():
            yield event.plain_result("💡 用法: 精化见证 主体[,主体...] 公式\n示例: 精化见证 a [a]p")
            return
        try:
            agents = [a.strip() for a in agent_part.split(",") if a.strip()]
            pointed = self._get_user_model(event.get_sender_id())
            f = self._parse_for(formula_text.strip(), pointed)
            if len(agents) == 1:
                witness = await self._run(synthesize_witness, pointed, agents[0], f)
            else:
                witness = await self._run(synthesize_group_witness, pointed, agents, f)
            if witness is None:
                yield event.plain_result(
                    f"❌ 不存在满足该公式的 {','.join(agents)}-精化\n📝 {f.text}"
                )
                return
            yield event.plain_result(
                f"✅ 找到精化见证 ({len(witness.model.states)} 个状态)\n"
                f"{dumps(model_to_dict(witness))}"
            )
        except RMLError as e:
            yield event.plain_result(self._format_error(e))
        except asyncio.TimeoutError:
            yield event.plain_result("⏰ 构造超时\n💡 请尝试更短的公式")
        except Exception as e:
            logger.error(f"构造精化见证出错: {e}")
            yield event.plain_result(f"❌ 构造失败: {str(e)}")

    @filter.command("模态帮助")
    async def rml_help(self, event: AstrMessageEvent):
        """显示插件帮助信息"""
        help_text = """
🧩 精化模态逻辑工作台帮助
━━━━━━━━━━━━━━━━━
📝 公式:
🔹 模态解析 公式 - 解析并规范打印
🔹 模态归约 公式 - 消去精化量词
🔹 模态有效 公式 - 有效性判定(附反模型)
🔹 模态可满足 公式 - 可满足性判定(附模型)
━━━━━━━━━━━━━━━━━
📊 模型:
🔹 设置模型 示例名/JSON - 设置当前模型
🔹 当前模型 - 查看当前模型
🔹 模型导出 - 导出 Graphviz DOT
🔹 模态检查 公式 - 在指定点求值
🔹 精化见证 主体 公式 - 构造满足公式的精化
🔹 模态帮助 - 显示本帮助
━━━━━━━━━━━━━━━━━
✏️ 语法:
  top bottom ~ & | -> <->
  [a]φ 必然  <a>φ 可能
  A_a φ / E_a φ 对所有/存在 a-精化
  A / E 对全部主体的精化
  nabla_a {φ, ψ} 覆盖
━━━━━━━━━━━━━━━━━
📈 示例:
  • 设置模型 p_uncertainty
  • 模态检查 E ([a]p & ~[b][a]p)
  • 模态归约 E_a <a>p
  • 模态有效 <a>top -> E_a ([a]p | [a]~p)
  • 精化见证 a [a]bottom
""".strip()
        yield event.plain_result(help_text)

    async def terminate(self):
        """插件停止时的清理工作"""
        logger.info("精化模态逻辑插件已停止")
