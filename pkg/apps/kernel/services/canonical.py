# apps/kernel/services/canonical.py
# ================================================================================
"""
Canonical forms through nauty.

A structure is encoded as a vertex-colored graph:

* one vertex per element, colored by the set of unary symbols it satisfies;
* one vertex per tuple of arity ≥ 2, colored by its symbol;
* one vertex per (tuple, position), colored by (symbol, position), joined to
  the tuple vertex and to the element at that position.

Element cells come first in the coloring, so nauty's canonical labeling puts
the elements on positions ``0..n-1``; reading those positions off gives the
relabeling of the structure.  The canonical form is the relabeled tuple table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

import pynauty

from apps.kernel.conf import CANONICAL_CACHE_SIZE, current_limits
from apps.kernel.exceptions import LimitExceededError
from apps.kernel.structures import Signature, Structure, ensure_same_signature

if TYPE_CHECKING:
    from collections.abc import Sequence

type Certificate = tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(slots=True, frozen=True, order=True)
class CanonicalForm:
    """Total-order key; equal forms ⇔ isomorphic structures over one signature."""

    size: int
    encoding: Certificate
    sig: Signature = field(compare=True)

    def short(self) -> str:
        return f"n={self.size}:" + "|".join(",".join("".join(map(str, t)) for t in rel) for rel in self.encoding)


# ─── Graph encoding ─────────────────────────────────────────────────────────────


def as_colored_graph(s: Structure) -> pynauty.Graph:
    """The vertex-colored graph whose canonical labeling canonicalizes ``s``."""
    n = s.size
    unary = [rel for (_, arity), rel in zip(s.sig.symbols, s.relations, strict=True) if arity == 1]
    element_cells: dict[tuple[bool, ...], set[int]] = {}
    for x in s.universe:
        element_cells.setdefault(tuple((x,) in rel for rel in unary), set()).add(x)
    coloring = [element_cells[key] for key in sorted(element_cells)]

    adjacency: dict[int, list[int]] = {}
    nxt = n
    for (_, arity), rel in zip(s.sig.symbols, s.relations, strict=True):
        if arity < 2 or not rel:
            continue
        tuple_cell: set[int] = set()
        position_cells: list[set[int]] = [set() for _ in range(arity)]
        for t in sorted(rel):
            hub, nxt = nxt, nxt + 1
            tuple_cell.add(hub)
            adjacency[hub] = []
            for pos, x in enumerate(t):
                spoke, nxt = nxt, nxt + 1
                position_cells[pos].add(spoke)
                adjacency[hub].append(spoke)
                adjacency[spoke] = [x]
        coloring.extend([tuple_cell, *position_cells])

    return pynauty.Graph(nxt, directed=False, adjacency_dict=adjacency, vertex_coloring=coloring)


def _certificate(s: Structure, lab: Sequence[int]) -> Certificate:
    return tuple(tuple(sorted(tuple(lab[x] for x in t) for t in rel)) for rel in s.relations)


def _check_size(s: Structure) -> None:
    limit = current_limits().CANONICAL_MAX_SIZE
    if s.size > limit:
        raise LimitExceededError("canonical form size", s.size, limit)


@lru_cache(maxsize=CANONICAL_CACHE_SIZE)
def _solve(s: Structure) -> tuple[Certificate, tuple[int, ...]]:
    if s.size == 0:
        return _certificate(s, ()), ()
    order = pynauty.canon_label(as_colored_graph(s))
    lab = [0] * s.size
    for position, v in enumerate(order[: s.size]):
        lab[v] = position
    return _certificate(s, lab), tuple(lab)


# ─── Public API ─────────────────────────────────────────────────────────────────


def canonical_form(s: Structure) -> CanonicalForm:
    _check_size(s)
    cert, _ = _solve(s)
    return CanonicalForm(s.size, cert, s.sig)


def canonical_labeling(s: Structure) -> tuple[int, ...]:
    """``lab`` with ``s.relabel(lab)`` equal to the canonical representative."""
    _check_size(s)
    return _solve(s)[1]


def canonical_structure(s: Structure) -> Structure:
    return s.relabel(canonical_labeling(s))


def structure_of(cf: CanonicalForm) -> Structure:
    """The canonical representative a form encodes."""
    return Structure(cf.sig, cf.size, tuple(frozenset(rel) for rel in cf.encoding))


def is_isomorphic(a: Structure, b: Structure) -> bool:
    ensure_same_signature(a, b)
    if a.size != b.size or [len(r) for r in a.relations] != [len(r) for r in b.relations]:
        return False
    return canonical_form(a) == canonical_form(b)


def canonical_cache_info() -> dict[str, int]:
    info = _solve.cache_info()
    return {"hits": info.hits, "misses": info.misses, "size": info.currsize}
