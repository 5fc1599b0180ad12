# apps/kernel/services/ages.py
# ================================================================================
"""Ages, quantifier-free classes over a base, and congruence quotients."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from math import prod
from typing import TYPE_CHECKING

from sortedcontainers import SortedSet

from apps.kernel.exceptions import PartitionError, StructureError
from apps.kernel.services.canonical import CanonicalForm, canonical_form
from apps.kernel.structures import Structure, Tup, induced_substructure

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence


# ─── Ages ───────────────────────────────────────────────────────────────────────


def age_of(s: Structure, max_size: int) -> SortedSet[CanonicalForm]:
    """Canonical forms of every induced substructure with at most ``max_size`` elements."""
    forms: SortedSet[CanonicalForm] = SortedSet()
    for r in range(min(max_size, s.size) + 1):
        for subset in combinations(s.universe, r):
            forms.add(canonical_form(induced_substructure(s, subset)[0]))
    return forms


# ─── qf-classes ─────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class QfClassSelector:
    ambient: Structure
    base: frozenset[int]
    pivot: int

    def __post_init__(self) -> None:
        n = self.ambient.size
        if not 0 <= self.pivot < n or any(not 0 <= x < n for x in self.base):
            msg = f"selector references elements outside 0..{n - 1}"
            raise StructureError(msg)
        if self.pivot in self.base:
            msg = f"pivot {self.pivot} lies in the base"
            raise StructureError(msg)


def qf_class(sel: QfClassSelector) -> frozenset[int]:
    """Elements ``a`` outside the base for which ``pivot ↦ a`` fixes the base's qf-type."""
    s, base, c = sel.ambient, sorted(sel.base), sel.pivot
    domain = [*base, c]
    pivot_tuples = [
        (rel, t)
        for (_, arity), rel in zip(s.sig.symbols, s.relations, strict=True)
        for t in product(domain, repeat=arity)
        if c in t
    ]
    members = set()
    for a in s.universe:
        if a in sel.base:
            continue
        if all((t in rel) == (tuple(a if x == c else x for x in t) in rel) for rel, t in pivot_tuples):
            members.add(a)
    return frozenset(members)


# ─── Congruences ────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class Quotient:
    structure: Structure
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]


@dataclass(slots=True, frozen=True)
class CongruenceViolation:
    """``inside`` is in the relation, ``outside`` is not, and they are class-wise equal."""

    symbol: str
    inside: Tup
    outside: Tup

    @property
    def message(self) -> str:
        return f"{self.symbol} is not a congruence: {list(self.inside)} holds but {list(self.outside)} does not"


def normalize_partition(size: int, blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Blocks sorted internally and ordered by least element; must cover ``0..size-1`` exactly once."""
    cleaned = [tuple(sorted(b)) for b in blocks]
    if any(not b for b in cleaned):
        msg = "partition has an empty block"
        raise PartitionError(msg)
    flat = sorted(x for b in cleaned for x in b)
    if flat != list(range(size)):
        msg = f"blocks do not partition 0..{size - 1}"
        raise PartitionError(msg)
    return tuple(sorted(cleaned))


def blocks_of(relation: Iterable[Tup], size: int) -> tuple[tuple[int, ...], ...] | None:
    """Blocks of an equivalence relation given as pairs, or ``None`` if it is not one."""
    pairs = set(relation)
    for x in range(size):
        if (x, x) not in pairs:
            return None
    for x, y in pairs:
        if (y, x) not in pairs:
            return None
    for x, y in pairs:
        for z in range(size):
            if (y, z) in pairs and (x, z) not in pairs:
                return None
    blocks: dict[int, list[int]] = {}
    for x in range(size):
        root = min(y for y in range(size) if (x, y) in pairs)
        blocks.setdefault(root, []).append(x)
    return tuple(tuple(b) for _, b in sorted(blocks.items()))


def quotient_by_congruence(
    s: Structure,
    eq: Iterable[Iterable[int]],
    symbols: Sequence[str],
) -> Quotient | CongruenceViolation:
    classes = normalize_partition(s.size, eq)
    class_of = [0] * s.size
    for i, block in enumerate(classes):
        for x in block:
            class_of[x] = i

    quotient_rels = []
    for name in symbols:
        rel = s.rel(name)
        counts = Counter(tuple(class_of[x] for x in t) for t in rel)
        for ct in sorted(counts):
            if counts[ct] != prod(len(classes[c]) for c in ct):
                inside = min(t for t in rel if tuple(class_of[x] for x in t) == ct)
                outside = next(t for t in product(*(classes[c] for c in ct)) if t not in rel)
                return CongruenceViolation(name, inside, outside)
        quotient_rels.append(frozenset(counts))

    sig = s.sig.restrict(symbols)
    ordered = [quotient_rels[list(symbols).index(n)] for n in sig.names]
    return Quotient(Structure(sig, len(classes), tuple(ordered)), classes, tuple(class_of))
