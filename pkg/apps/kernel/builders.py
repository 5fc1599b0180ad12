"""Small constructors for the structures that keep coming up."""

from __future__ import annotations

from itertools import combinations, permutations
from typing import TYPE_CHECKING, Final

from apps.kernel.structures import Signature, Structure

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

GRAPH_SIG: Final[Signature] = Signature.of(("E", 2))
ORDER_SIG: Final[Signature] = Signature.of(("R", 2))
UNARY_SIG: Final[Signature] = Signature.of(("P", 1))
EMPTY_SIG: Final[Signature] = Signature()


def graph(n: int, edges: Iterable[Sequence[int]], *, symbol: str = "E") -> Structure:
    """Symmetric irreflexive graph; each edge is listed once."""
    sig = GRAPH_SIG if symbol == "E" else Signature.of((symbol, 2))
    pairs = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
    return Structure.build(sig, n, {symbol: pairs})


def complete_graph(n: int) -> Structure:
    return graph(n, combinations(range(n), 2))


def edgeless_graph(n: int) -> Structure:
    return graph(n, [])


def path_graph(n: int) -> Structure:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def digraph(n: int, arcs: Iterable[Sequence[int]], *, symbol: str = "R") -> Structure:
    sig = ORDER_SIG if symbol == "R" else Signature.of((symbol, 2))
    return Structure.build(sig, n, {symbol: [tuple(a) for a in arcs]})


def linear_order(n: int) -> Structure:
    """``0 < 1 < … < n-1`` as a strict order."""
    return digraph(n, combinations(range(n), 2))


def equivalence(n: int, blocks: Iterable[Iterable[int]], *, symbol: str = "E") -> Structure:
    pairs = [(a, b) for block in blocks for a in block for b in block]
    return Structure.build(Signature.of((symbol, 2)), n, {symbol: pairs})


def unary(n: int, marked: Iterable[int], *, symbol: str = "P") -> Structure:
    sig = UNARY_SIG if symbol == "P" else Signature.of((symbol, 1))
    return Structure.build(sig, n, {symbol: [(x,) for x in marked]})


def bare_set(n: int) -> Structure:
    return Structure.empty(EMPTY_SIG, n)


def permuted(s: Structure) -> list[Structure]:
    """``s`` relabeled by every permutation of its universe."""
    return [s.relabel(p) for p in permutations(s.universe)]
