# apps/kernel/structures.py
# ================================================================================
"""
Immutable value types for finite relational structures.

* ``Signature``  – ordered (name, arity) pairs
* ``Structure``  – universe ``0..size-1`` plus one tuple set per symbol
* ``Embedding``  – injective strong homomorphism between two structures

Constructors never check invariants by themselves; ``Structure.build`` and
``validate_structure`` do.  Every operation that produces a structure renumbers
its universe and returns the witnessing maps alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING, Any

from apps.kernel.exceptions import EmbeddingError, SignatureError, StructureError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping, Sequence

type Tup = tuple[int, ...]
type Relation = frozenset[Tup]


# ─── Signature ──────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, order=True)
class Signature:
    symbols: tuple[tuple[str, int], ...] = ()
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        seen: dict[str, int] = {}
        for pos, (name, arity) in enumerate(self.symbols):
            if not isinstance(name, str) or not name.isidentifier():
                msg = f"symbol name {name!r} is not an identifier"
                raise SignatureError(msg)
            if name in seen:
                msg = f"duplicate symbol {name!r}"
                raise SignatureError(msg)
            if not isinstance(arity, int) or arity < 1:
                msg = f"symbol {name!r} has arity {arity!r}; arity must be ≥ 1"
                raise SignatureError(msg)
            seen[name] = pos
        object.__setattr__(self, "_index", seen)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> Signature:
        """``Signature.of(("E", 2), ("P", 1))``"""
        return cls(tuple((str(n), int(a)) for n, a in pairs))

    # -- lookups ------------------------------------------------------------------
    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.symbols), default=0)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            msg = f"unknown symbol {name!r} (signature has {', '.join(self.names) or 'no symbols'})"
            raise SignatureError(msg) from None

    def arity(self, name: str) -> int:
        return self.symbols[self.index(name)][1]

    # -- derived signatures -------------------------------------------------------
    def restrict(self, names: Iterable[str]) -> Signature:
        wanted = set(names)
        for name in wanted:
            self.index(name)
        return Signature(tuple(s for s in self.symbols if s[0] in wanted))

    def rename(self, mapping: Mapping[str, str]) -> Signature:
        for name in mapping:
            self.index(name)
        return Signature(tuple((mapping.get(n, n), a) for n, a in self.symbols))

    def is_disjoint(self, other: Signature) -> bool:
        return not set(self.names) & set(other.names)

    def describe(self) -> str:
        return ", ".join(f"{n}/{a}" for n, a in self.symbols) or "(empty)"


# ─── Structure ──────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class StructureViolation:
    kind: str
    symbol: str | None = None
    tup: Tup | None = None

    @property
    def message(self) -> str:
        where = f" in {self.symbol}{list(self.tup) if self.tup is not None else ''}" if self.symbol else ""
        return f"{self.kind}{where}"


@dataclass(slots=True, frozen=True)
class Structure:
    """``relations[i]`` is the tuple set of ``sig.symbols[i]``."""

    sig: Signature
    size: int
    relations: tuple[Relation, ...]

    # -- construction -------------------------------------------------------------
    @classmethod
    def build(
        cls,
        sig: Signature,
        size: int,
        relations: Mapping[str, Iterable[Sequence[int]]] | None = None,
        *,
        check: bool = True,
    ) -> Structure:
        table: list[set[Tup]] = [set() for _ in sig.symbols]
        for name, tuples in (relations or {}).items():
            table[sig.index(name)].update(tuple(int(x) for x in t) for t in tuples)
        s = cls(sig, int(size), tuple(frozenset(r) for r in table))
        if check and (violation := validate_structure(s)) is not None:
            raise StructureError(violation.message)
        return s

    @classmethod
    def empty(cls, sig: Signature, size: int = 0) -> Structure:
        return cls(sig, size, tuple(frozenset() for _ in sig.symbols))

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> Structure:
        """Inverse of ``as_record``; validates."""
        try:
            sig = Signature.of(*(tuple(pair) for pair in record["signature"]))
            return cls.build(sig, record["size"], record.get("relations") or {})
        except (KeyError, TypeError) as exc:
            msg = f"malformed structure record: {exc}"
            raise StructureError(msg) from exc

    def as_record(self) -> dict[str, Any]:
        return {
            "signature": [[n, a] for n, a in self.sig.symbols],
            "size": self.size,
            "relations": {n: [list(t) for t in sorted(r)] for (n, _), r in zip(self.sig.symbols, self.relations, strict=True)},
        }

    # -- access -------------------------------------------------------------------
    @property
    def universe(self) -> range:
        return range(self.size)

    def rel(self, name: str) -> Relation:
        return self.relations[self.sig.index(name)]

    def holds(self, name: str, tup: Sequence[int]) -> bool:
        return tuple(tup) in self.rel(name)

    def items(self) -> Iterator[tuple[str, Relation]]:
        for (name, _), rel in zip(self.sig.symbols, self.relations, strict=True):
            yield name, rel

    @property
    def tuple_count(self) -> int:
        return sum(len(r) for r in self.relations)

    def __repr__(self) -> str:
        body = ", ".join(f"{n}={sorted(r)}" for n, r in self.items())
        return f"Structure(size={self.size}{', ' if body else ''}{body})"

    # -- derived structures -------------------------------------------------------
    def relabel(self, perm: Sequence[int]) -> Structure:
        """Image of ``self`` under the bijection ``x ↦ perm[x]``."""
        if sorted(perm) != list(range(self.size)):
            msg = f"{list(perm)} is not a permutation of 0..{self.size - 1}"
            raise StructureError(msg)
        return Structure(
            self.sig,
            self.size,
            tuple(frozenset(tuple(perm[x] for x in t) for t in rel) for rel in self.relations),
        )

    def reduct(self, names: Iterable[str], rename: Mapping[str, str] | None = None) -> Structure:
        """Forget every symbol not in ``names``; optionally rename the survivors."""
        keep = self.sig.restrict(names)
        rels = tuple(self.rel(n) for n in keep.names)
        sig = keep.rename(rename) if rename else keep
        return Structure(sig, self.size, rels)

    def expand(self, extra: Signature, relations: Mapping[str, Iterable[Sequence[int]]]) -> Structure:
        """Same universe over ``sig + extra``; ``extra`` must be disjoint from ``sig``."""
        if not self.sig.is_disjoint(extra):
            msg = f"expansion symbols collide: [{self.sig.describe()}] vs [{extra.describe()}]"
            raise SignatureError(msg)
        added = Structure.build(extra, self.size, relations)
        return Structure(Signature(self.sig.symbols + extra.symbols), self.size, self.relations + added.relations)

    def with_relations(self, sig: Signature, relations: Sequence[Relation]) -> Structure:
        return Structure(sig, self.size, tuple(frozenset(r) for r in relations))


def validate_structure(s: Structure) -> StructureViolation | None:
    """First offending tuple in symbol order then sorted tuple order, else ``None``."""
    if not isinstance(s.size, int) or s.size < 0:
        return StructureViolation("negative size")
    if len(s.relations) != len(s.sig.symbols):
        return StructureViolation("relation table does not match signature")
    for (name, arity), rel in zip(s.sig.symbols, s.relations, strict=True):
        for t in sorted(rel, key=lambda t: (len(t), t)):
            if len(t) != arity:
                return StructureViolation("arity mismatch", name, t)
            if any(not isinstance(x, int) or x < 0 or x >= s.size for x in t):
                return StructureViolation("entry out of range", name, t)
    return None


def ensure_same_signature(a: Structure, b: Structure) -> None:
    if a.sig != b.sig:
        msg = f"signature mismatch: [{a.sig.describe()}] vs [{b.sig.describe()}]"
        raise SignatureError(msg)


def induced_substructure(s: Structure, subset: Iterable[int]) -> tuple[Structure, Embedding]:
    """Restriction to ``subset`` renumbered in increasing order, plus its inclusion."""
    elems = sorted(set(subset))
    if elems and (elems[0] < 0 or elems[-1] >= s.size):
        msg = f"element out of range for a structure of size {s.size}: {elems}"
        raise StructureError(msg)
    pos = {x: i for i, x in enumerate(elems)}
    rels = tuple(
        frozenset(tuple(pos[x] for x in t) for t in rel if all(x in pos for x in t)) for rel in s.relations
    )
    sub = Structure(s.sig, len(elems), rels)
    return sub, Embedding(sub, s, tuple(elems))


def all_tuples(elements: Sequence[int], arity: int) -> Iterator[Tup]:
    return product(elements, repeat=arity)


# ─── Embedding ──────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class Embedding:
    source: Structure
    target: Structure
    map: Tup

    @classmethod
    def checked(cls, source: Structure, target: Structure, mapping: Sequence[int]) -> Embedding:
        m = tuple(mapping)
        if (reason := embedding_defect(source, target, m)) is not None:
            raise EmbeddingError(reason)
        return cls(source, target, m)

    @classmethod
    def identity(cls, s: Structure) -> Embedding:
        return cls(s, s, tuple(s.universe))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def apply(self, tup: Iterable[int]) -> Tup:
        return tuple(self.map[x] for x in tup)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def compose(self, after: Embedding) -> Embedding:
        """``after ∘ self``"""
        if self.target != after.source:
            msg = "cannot compose: target of the first map is not the source of the second"
            raise EmbeddingError(msg)
        return Embedding(self.source, after.target, tuple(after.map[y] for y in self.map))

    def inverse(self) -> Embedding:
        if len(self.map) != self.target.size:
            msg = "only bijective embeddings have inverses"
            raise EmbeddingError(msg)
        inv = [0] * len(self.map)
        for x, y in enumerate(self.map):
            inv[y] = x
        return Embedding(self.target, self.source, tuple(inv))

    def __repr__(self) -> str:
        return f"Embedding({list(self.map)})"


def embedding_defect(source: Structure, target: Structure, mapping: Sequence[int]) -> str | None:
    """Why ``mapping`` is not a strong embedding, or ``None``."""
    if source.sig != target.sig:
        return "signature mismatch"
    if len(mapping) != source.size:
        return f"map has {len(mapping)} entries, source has {source.size} elements"
    if any(y < 0 or y >= target.size for y in mapping):
        return "map leaves the target universe"
    if len(set(mapping)) != len(mapping):
        return "map is not injective"
    image = set(mapping)
    for (name, _), ra, rb in zip(source.sig.symbols, source.relations, target.relations, strict=True):
        for t in ra:
            if tuple(mapping[x] for x in t) not in rb:
                return f"{name}{list(t)} is not preserved"
        inside = sum(1 for t in rb if all(y in image for y in t))
        if inside != len(ra):
            return f"{name} gains tuples on the image"
    return None


def is_embedding(source: Structure, target: Structure, mapping: Sequence[int]) -> bool:
    return embedding_defect(source, target, mapping) is None
