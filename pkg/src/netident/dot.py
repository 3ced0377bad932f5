"""Graphviz DOT export.  Members of the highlighted set are drawn filled black."""

from __future__ import annotations

from typing import Iterable, Mapping

from .graph import Graph


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    g: Graph,
    highlight: Iterable[int] = (),
    labels: Mapping[int, str] | None = None,
    name: str = "G",
) -> str:
    marked = set(highlight)
    labels = labels or {}
    lines = [f"digraph {_quote(name)} {{", "  node [shape=circle];"]
    for v in g.vertices:
        attrs = [f"label={_quote(labels.get(v, str(v)))}"]
        if v in marked:
            attrs += ["style=filled", "fillcolor=black", "fontcolor=white"]
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for a, b in g.sorted_edges():
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
