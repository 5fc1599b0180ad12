# apps/workbench/services/dot.py
# ================================================================================
"""Graphviz DOT rendering of a structure.

* unary symbols become node labels;
* a pair of an E-style symbol present in both directions is one undirected
  edge; every other binary tuple is an arrow;
* a symbol of arity three or more gets one factor node per tuple, joined to
  each member with an edge labelled by its position.

The output is deterministic: nodes, edges and factors are emitted in sorted
order.  If any edge is directed the whole graph is a ``digraph`` and the
collapsed pairs carry ``dir=none``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from apps.workbench.conf import DOT_FACTOR_SHAPE, DOT_GRAPH_NAME, DOT_UNDIRECTED_PREFIX

if TYPE_CHECKING:
    from collections.abc import Collection

    from apps.kernel.structures import Structure


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(s: Structure, name: str = DOT_GRAPH_NAME, *, undirected: Collection[str] | None = None) -> str:
    """``undirected`` names the symbols whose symmetric pairs collapse; default: the E-style ones."""
    if undirected is None:
        undirected = [n for n in s.sig.names if n.startswith(DOT_UNDIRECTED_PREFIX)]
    edges: list[tuple[int, int, str]] = []
    directed: list[tuple[int, int, str]] = []
    labels: dict[int, list[str]] = {x: [] for x in s.universe}
    factors: list[tuple[str, tuple[int, ...]]] = []

    for symbol, rel in s.items():
        arity = s.sig.arity(symbol)
        for t in sorted(rel):
            if arity == 1:
                labels[t[0]].append(symbol)
            elif arity == 2:
                x, y = t
                if symbol not in undirected or (y, x) not in rel:
                    directed.append((x, y, symbol))
                elif x <= y:
                    edges.append((x, y, symbol))
            else:
                factors.append((symbol, t))

    is_digraph = bool(directed)
    arrow = "->" if is_digraph else "--"
    lines = [f"{'digraph' if is_digraph else 'graph'} {_quote(name)} {{"]
    for x in s.universe:
        text = f"{x}: {' '.join(labels[x])}" if labels[x] else str(x)
        lines.append(f"  {x} [label={_quote(text)}];")
    for x, y, symbol in edges:
        extra = ", dir=none" if is_digraph else ""
        lines.append(f"  {x} {arrow} {y} [label={_quote(symbol)}{extra}];")
    for x, y, symbol in directed:
        lines.append(f"  {x} -> {y} [label={_quote(symbol)}];")
    for n, (symbol, t) in enumerate(factors):
        node = f"f{n}"
        caption = f"{symbol}({','.join(map(str, t))})"
        lines.append(f"  {node} [shape={DOT_FACTOR_SHAPE}, xlabel={_quote(caption)}];")
        for pos, x in enumerate(t):
            extra = ", dir=none" if is_digraph else ""
            lines.append(f"  {node} {arrow} {x} [label={_quote(str(pos))}{extra}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
