# Rendering of dependency DAGs as DOT text and pyvis HTML
import json
import logging
from typing import List

import networkx as nx
from pyvis.network import Network

from src.config import DAG_EDGE_COLORS, DAG_NETWORK_CONFIG, DAG_NODE_COLORS, ERROR_MESSAGES
from src.errors import ValidationError
from src.hierarchy import induction_order
from src.utils import format_rational

logger = logging.getLogger(__name__)

RGBA_ALPHA = 0.6


def hex_to_rgb(hex_color: str):
    """Convert '#RRGGBB' to an (r, g, b) tuple."""
    hex_color = hex_color.lstrip('#')
    return tuple(int(hex_color[i:i + 2], 16) for i in (0, 2, 4))


def _dot_escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def to_dot(graph: nx.DiGraph) -> str:
    """DOT description with nodes in induction order; deterministic for a given graph."""
    order = induction_order(graph)
    ids = {node: i for i, node in enumerate(order)}
    lines = ["digraph dependencies {", "  rankdir=BT;"]
    for node in order:
        data = graph.nodes[node]
        label = f"{_dot_escape(data['label'])}\\n|.|< = {format_rational(data['level'])}"
        color = DAG_NODE_COLORS[data['kind']]
        lines.append(f'  n{ids[node]} [label="{label}", color="{color}"];')
    edges = sorted(graph.edges(data=True), key=lambda e: (ids[e[0]], ids[e[1]]))
    for u, v, data in edges:
        style = ', style=dashed' if data['relation'] == 'fixes' else ''
        lines.append(f'  n{ids[u]} -> n{ids[v]} [label="{data["relation"]}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _build_network(graph: nx.DiGraph) -> Network:
    net = Network(
        height=DAG_NETWORK_CONFIG['height'],
        width=DAG_NETWORK_CONFIG['width'],
        directed=True,
        bgcolor=DAG_NETWORK_CONFIG['bgcolor'],
        font_color=DAG_NETWORK_CONFIG['font_color'],
        select_menu=False,
        filter_menu=False,
        cdn_resources='local'
    )
    net.set_options(json.dumps({
        'layout': {'hierarchical': {'enabled': True, 'direction': 'DU', 'sortMethod': 'directed',
                                    'levelSeparation': DAG_NETWORK_CONFIG['level_separation']}},
        'physics': {'enabled': False}
    }))

    order: List[tuple] = induction_order(graph)
    ids = {node: i for i, node in enumerate(order)}
    # equal orders share a rank
    levels = {lvl: rank for rank, lvl in enumerate(sorted({graph.nodes[n]['level'] for n in order}))}
    for node in order:
        data = graph.nodes[node]
        r, g, b = hex_to_rgb(DAG_NODE_COLORS[data['kind']])
        net.add_node(ids[node],
                     label=data['label'],
                     title=f"{data['label']} (order {format_rational(data['level'])})",
                     level=levels[data['level']],
                     color={'background': f"rgba({r},{g},{b},{RGBA_ALPHA})", 'border': f"rgba({r},{g},{b},1)"},
                     shape='box')
    for u, v, data in graph.edges(data=True):
        net.add_edge(ids[u], ids[v], arrows='to', color=DAG_EDGE_COLORS[data['relation']],
                     title=data['relation'])
    return net


def to_html(graph: nx.DiGraph, path: str) -> str:
    """Write an interactive pyvis view of the DAG to path and return the path."""
    net = _build_network(graph)
    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(net.generate_html())
    except OSError as e:
        raise ValidationError(ERROR_MESSAGES['save_data'].format(path=path, error=e))
    logger.info(f"Wrote dependency view with {graph.number_of_nodes()} nodes to {path}")
    return path
