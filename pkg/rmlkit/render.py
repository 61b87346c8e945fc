"""
Graphviz DOT 导出
用 Jinja2 模板把模型与动作模型渲染为 DOT 文本（只输出文本，不生成图片）
"""

from jinja2 import Environment

from .models import PointedActionModel, PointedModel

DOT_TEMPLATE = """\
digraph {{ name }} {
  rankdir=LR;
  node [shape=ellipse, fontname="monospace"];
{% for node in nodes %}
  {{ node.id | dot_id }} [label={{ node.label | dot_id }}{% if node.point %}, peripheries=2{% endif %}];
{% endfor %}
{% for edge in edges %}
  {{ edge.source | dot_id }} -> {{ edge.target | dot_id }} [label={{ edge.agents | dot_id }}];
{% endfor %}
}
"""


def _dot_id(value: str) -> str:
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


_env = Environment(trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
_env.filters["dot_id"] = _dot_id
_template = _env.from_string(DOT_TEMPLATE)


def _edges(relations) -> list[dict[str, str]]:
    """同一对结点之间的多个主体合并为一条边，标签为逗号分隔的主体名"""
    merged: dict[tuple[str, str], list[str]] = {}
    for agent, pairs in sorted(relations.items()):
        for pair in sorted(pairs):
            merged.setdefault(pair, []).append(agent)
    return [
        {"source": s, "target": t, "agents": ",".join(agents)}
        for (s, t), agents in sorted(merged.items())
    ]


def model_to_dot(pointed: PointedModel, name: str = "M") -> str:
    """状态标签为 名字: 为真的命题；指定点画双圈"""
    model = pointed.model
    nodes = []
    for s in model.sorted_states:
        props = ",".join(sorted(model.labels(s)))
        nodes.append(
            {"id": s, "label": f"{s}: {props}" if props else s, "point": s == pointed.point}
        )
    return _template.render(name=name, nodes=nodes, edges=_edges(model.relations))


def action_to_dot(pointed: PointedActionModel, name: str = "A") -> str:
    """动作点标签为 名字: 前提"""
    action = pointed.action
    nodes = [
        {"id": e, "label": f"{e}: {action.pre[e].text}", "point": e == pointed.point}
        for e in sorted(action.points)
    ]
    return _template.render(name=name, nodes=nodes, edges=_edges(action.relations))
