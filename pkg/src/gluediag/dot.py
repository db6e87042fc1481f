"""Graphviz DOT output for graphs and gluing diagrams.

Root vertices are drawn as squares. A diagram is drawn as one forest per
source vertex v: a tree of target paths hanging off each member of x_v, cut
off at the basis B_v. Leaves are filled with the colour of the edge whose
block owns them and carry their γ number.
"""

from __future__ import annotations

from .diagram import GluingDiagram
from .graphs import Graph
from .paths import TaggedPath

PALETTE = ("#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
           "#f032e6", "#bfef45", "#fabed4", "#469990", "#dcbeff", "#9a6324")


def _shape(g: Graph, v: int) -> str:
    return "square" if g.root == v else "circle"


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(g.vertex_count):
        lines.append(f'  v{v} [label="{v}", shape={_shape(g, v)}];')
    for e, (o, t) in enumerate(g.edges):
        lines.append(f'  v{o} -> v{t} [label="e{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node(v: int, p: TaggedPath) -> str:
    return f'"{v}/{p}"'


def diagram_to_dot(d: GluingDiagram, name: str = "diagram") -> str:
    src, tgt = d.source, d.target
    lines = [f"digraph {name} {{", "  compound=true;", "  node [fontsize=10];"]
    for v in range(src.vertex_count):
        owner = d.block_edge_of(v)
        labels = d.basis_at(v)
        nodes = {q for p in labels for q in p.prefixes()}
        nodes.update(TaggedPath(t, ()) for t in range(len(d.x[v])))
        space = d.member_space(v)
        lines.append(f"  subgraph cluster_{v} {{")
        lines.append(f'    label="vertex {v} ({"root" if src.root == v else "x_v"})";')
        for p in sorted(nodes):
            w = space.terminus(p)
            attrs = [f"shape={_shape(tgt, w)}"]
            if p in labels:
                colour = PALETTE[owner[p] % len(PALETTE)]
                attrs += [f'label="{labels[p]}"', "style=filled", f'fillcolor="{colour}"',
                          f'tooltip="{p} in C_e{owner[p]}"']
            else:
                attrs.append(f'label="{w}"' if not p.edges else 'label=""')
            lines.append(f"    {_node(v, p)} [{', '.join(attrs)}];")
        for p in sorted(nodes):
            if p.edges:
                lines.append(f'    {_node(v, p.parent)} -> {_node(v, p)} [label="e{p.edges[-1]}"];')
        lines.append("  }")
    if d.start is not None:
        lines.append("  subgraph cluster_start {")
        lines.append('    label="start";')
        nodes = sorted({q for p in d.start for q in p.prefixes()})
        for p in nodes:
            attrs = [f"shape={_shape(tgt, d.root_space.terminus(p))}"]
            if p in d.start:
                attrs += [f'label="{d.start[p]}"', "style=filled", 'fillcolor="#dddddd"']
            else:
                attrs.append('label=""')
            lines.append(f"    {_node(-1, p)} [{', '.join(attrs)}];")
        for p in nodes:
            if p.edges:
                lines.append(f'    {_node(-1, p.parent)} -> {_node(-1, p)} [label="e{p.edges[-1]}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
