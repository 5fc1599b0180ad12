# apps/classes/services/builtins.py
# ================================================================================
"""
Builtin classes.

Each builtin owns a signature factory and a membership check that returns a
``Membership`` naming the first violated axiom.  Forests and planar graphs go
through networkx.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import TYPE_CHECKING, Final

import networkx as nx
import structlog

from apps.classes.datatype import YES, Membership
from apps.classes.exceptions import UnknownClassError
from apps.classes.specs import ClassKind, ClassSpec
from apps.kernel.conf import current_limits
from apps.kernel.exceptions import LimitExceededError
from apps.kernel.structures import Signature, Structure

if TYPE_CHECKING:
    from collections.abc import Callable

log = structlog.get_logger(__name__).bind(component="Builtins")


# ─── Helpers ────────────────────────────────────────────────────────────────────


def as_nx_graph(s: Structure, symbol: str = "E") -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(s.universe)
    g.add_edges_from((a, b) for a, b in s.rel(symbol) if a != b)
    return g


def _no(reason: str, witness: object = None) -> Membership:
    return Membership(member=False, reason=reason, witness=witness)


def _graph_defect(s: Structure, symbol: str = "E") -> Membership | None:
    rel = s.rel(symbol)
    for a, b in sorted(rel):
        if a == b:
            return _no(f"loop {symbol}({a},{a})", (a, a))
        if (b, a) not in rel:
            return _no(f"{symbol}({a},{b}) holds without {symbol}({b},{a})", (a, b))
    return None


def _irreflexive_defect(s: Structure, symbol: str) -> Membership | None:
    for t in sorted(s.rel(symbol)):
        if t[0] == t[1]:
            return _no(f"loop {symbol}({t[0]},{t[0]})", t)
    return None


def _transitivity_defect(s: Structure, symbol: str) -> Membership | None:
    rel = s.rel(symbol)
    for a, b in sorted(rel):
        for c in s.universe:
            if (b, c) in rel and (a, c) not in rel:
                return _no(f"{symbol}({a},{b}) and {symbol}({b},{c}) but not {symbol}({a},{c})", (a, b, c))
    return None


# ─── Checks ─────────────────────────────────────────────────────────────────────


def _sets(_: Structure) -> Membership:
    return YES


def _graphs(s: Structure) -> Membership:
    return _graph_defect(s) or YES


def _hypergraphs(s: Structure) -> Membership:
    rel = s.rel("E")
    for t in sorted(rel):
        if len(set(t)) != len(t):
            return _no(f"hyperedge {list(t)} repeats an element", t)
        for p in permutations(t):
            if p not in rel:
                return _no(f"hyperedge {list(t)} present but {list(p)} missing", t)
    return YES


def _digraphs(s: Structure) -> Membership:
    return _irreflexive_defect(s, "R") or YES


def _tournaments(s: Structure) -> Membership:
    if (bad := _irreflexive_defect(s, "R")) is not None:
        return bad
    rel = s.rel("R")
    for a in s.universe:
        for b in range(a + 1, s.size):
            both, neither = (a, b) in rel and (b, a) in rel, (a, b) not in rel and (b, a) not in rel
            if both or neither:
                return _no(f"pair ({a},{b}) has {'both' if both else 'no'} orientation(s)", (a, b))
    return YES


def _partial_orders(s: Structure) -> Membership:
    return _irreflexive_defect(s, "R") or _transitivity_defect(s, "R") or YES


def _linear_orders(s: Structure) -> Membership:
    if not (po := _partial_orders(s)):
        return po
    rel = s.rel("R")
    for a in s.universe:
        for b in range(a + 1, s.size):
            if (a, b) not in rel and (b, a) not in rel:
                return _no(f"elements {a} and {b} are incomparable", (a, b))
    return YES


def _equivalence_relations(s: Structure) -> Membership:
    rel = s.rel("E")
    for a in s.universe:
        if (a, a) not in rel:
            return _no(f"E({a},{a}) fails", (a, a))
    for a, b in sorted(rel):
        if (b, a) not in rel:
            return _no(f"E({a},{b}) holds without E({b},{a})", (a, b))
    return _transitivity_defect(s, "E") or YES


def _forests(s: Structure) -> Membership:
    if (bad := _graph_defect(s)) is not None:
        return bad
    try:
        cycle = nx.find_cycle(as_nx_graph(s))
    except nx.NetworkXNoCycle:
        return YES
    return _no(f"cycle of length {len(cycle)}", [tuple(e[:2]) for e in cycle])


def _planar_graphs(s: Structure) -> Membership:
    if (bad := _graph_defect(s)) is not None:
        return bad
    limit = current_limits().PLANARITY_MAX_SIZE
    if s.size > limit:
        log.warning("planarity limit hit", size=s.size, limit=limit)
        raise LimitExceededError("planarity test size", s.size, limit)
    planar, certificate = nx.check_planarity(as_nx_graph(s), counterexample=True)
    if planar:
        return YES
    edges = sorted(tuple(sorted(e)) for e in certificate.edges())
    return _no(f"contains a Kuratowski subdivision with {len(edges)} edges", edges)


def _unary_all(_: Structure) -> Membership:
    return YES


def _unary_at_most_one(s: Structure) -> Membership:
    marked = sorted(x for (x,) in s.rel("P"))
    if len(marked) > 1:
        return _no(f"P holds on {len(marked)} elements", marked)
    return YES


def _graph_union(s: Structure) -> Membership:
    for symbol in ("R0", "R1"):
        if (bad := _graph_defect(s, symbol)) is not None:
            return bad
    if s.rel("R0") and s.rel("R1"):
        return _no("both R0 and R1 are non-empty", (min(s.rel("R0")), min(s.rel("R1"))))
    return YES


# ─── Registry ───────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, kw_only=True)
class BuiltinDef:
    name: str
    signature: Callable[[int | None], Signature]
    check: Callable[[Structure], Membership]
    graph_like: bool
    parametric: bool = False
    blurb: str = ""


def _fixed(*symbols: tuple[str, int]) -> Callable[[int | None], Signature]:
    sig = Signature.of(*symbols)
    return lambda _param: sig


def _hyper_signature(k: int | None) -> Signature:
    if k is None or k < 2:
        msg = f"hypergraphs needs a uniformity k ≥ 2, got {k!r}"
        raise ValueError(msg)
    return Signature.of(("E", k))


BUILTINS: Final[dict[str, BuiltinDef]] = {
    d.name: d
    for d in (
        BuiltinDef(name="sets", signature=_fixed(), check=_sets, graph_like=True, blurb="pure sets"),
        BuiltinDef(name="graphs", signature=_fixed(("E", 2)), check=_graphs, graph_like=True,
                   blurb="symmetric irreflexive E"),
        BuiltinDef(name="hypergraphs", signature=_hyper_signature, check=_hypergraphs, graph_like=False,
                   parametric=True, blurb="k-uniform hypergraphs"),
        BuiltinDef(name="digraphs", signature=_fixed(("R", 2)), check=_digraphs, graph_like=False,
                   blurb="irreflexive R"),
        BuiltinDef(name="tournaments", signature=_fixed(("R", 2)), check=_tournaments, graph_like=False,
                   blurb="exactly one orientation per pair"),
        BuiltinDef(name="partial_orders", signature=_fixed(("R", 2)), check=_partial_orders, graph_like=False,
                   blurb="strict partial orders"),
        BuiltinDef(name="linear_orders", signature=_fixed(("R", 2)), check=_linear_orders, graph_like=False,
                   blurb="strict linear orders"),
        BuiltinDef(name="equivalence_relations", signature=_fixed(("E", 2)), check=_equivalence_relations,
                   graph_like=True, blurb="reflexive symmetric transitive E"),
        BuiltinDef(name="forests", signature=_fixed(("E", 2)), check=_forests, graph_like=True,
                   blurb="acyclic graphs"),
        BuiltinDef(name="planar_graphs", signature=_fixed(("E", 2)), check=_planar_graphs, graph_like=True,
                   blurb="graphs without Kuratowski subdivisions"),
        BuiltinDef(name="unary_all", signature=_fixed(("P", 1)), check=_unary_all, graph_like=True,
                   blurb="every structure over one unary P"),
        BuiltinDef(name="unary_at_most_one", signature=_fixed(("P", 1)), check=_unary_at_most_one,
                   graph_like=True, blurb="|P| ≤ 1"),
        BuiltinDef(name="graph_union", signature=_fixed(("R0", 2), ("R1", 2)), check=_graph_union,
                   graph_like=True, blurb="an R0-graph or an R1-graph, never both"),
    )
}


def builtin_def(name: str) -> BuiltinDef:
    try:
        return BUILTINS[name]
    except KeyError:
        msg = f"unknown builtin class {name!r}; known: {', '.join(sorted(BUILTINS))}"
        raise UnknownClassError(msg) from None


def builtin(name: str, param: int | None = None, *, label: str = "") -> ClassSpec:
    d = builtin_def(name)
    if param is not None and not d.parametric:
        msg = f"builtin {name!r} takes no parameter"
        raise ValueError(msg)
    return ClassSpec(sig=d.signature(param), kind=ClassKind.BUILTIN, builtin=name, param=param, label=label)
