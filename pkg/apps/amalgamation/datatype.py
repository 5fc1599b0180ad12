"""Amalgamation instances, amalgams and disjoint amalgamation systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from apps.kernel.exceptions import EmbeddingError
from apps.kernel.structures import Embedding, Structure, embedding_defect
from common.iterables_utils import subsets

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

type Index = frozenset[int]


def index_key(p: Index) -> tuple[int, tuple[int, ...]]:
    """Order on index sets: by size, then by sorted elements."""
    return len(p), tuple(sorted(p))


# ─── Two-sided instances ────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, kw_only=True)
class AmalgInstance:
    """``f0 : a → b0`` and ``f1 : a → b1``; with ``a`` empty this is a joint-embedding pair."""

    a: Structure
    b0: Structure
    b1: Structure
    f0: Embedding
    f1: Embedding

    def __post_init__(self) -> None:
        for name, f, target in (("f0", self.f0, self.b0), ("f1", self.f1, self.b1)):
            if f.source != self.a or f.target != target:
                msg = f"{name} does not run from a to b{name[-1]}"
                raise EmbeddingError(msg)
            if (reason := embedding_defect(self.a, target, f.map)) is not None:
                msg = f"{name}: {reason}"
                raise EmbeddingError(msg)

    @classmethod
    def of(cls, a: Structure, b0: Structure, b1: Structure, f0: Sequence[int], f1: Sequence[int]) -> AmalgInstance:
        return cls(a=a, b0=b0, b1=b1, f0=Embedding(a, b0, tuple(f0)), f1=Embedding(a, b1, tuple(f1)))

    @classmethod
    def joint(cls, a: Structure, b0: Structure, b1: Structure) -> AmalgInstance:
        """Joint-embedding instance over the empty structure ``a``."""
        return cls.of(a, b0, b1, (), ())


@dataclass(slots=True, frozen=True)
class Amalgam:
    c: Structure
    g0: Embedding
    g1: Embedding


@dataclass(slots=True, frozen=True)
class Unresolved:
    """A builder could not finish; ``instance`` is the sub-problem an oracle failed on."""

    reason: str
    instance: Any = None


# ─── Systems ────────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, kw_only=True)
class PSystem:
    """Structures ``A_p`` for ``p`` in an index family over ``0..n-1`` and maps ``f_{p,q}`` for ``p ⊆ q``.

    A missing ``f_{p,p}`` stands for the identity.
    """

    n: int
    structures: dict[Index, Structure]
    maps: dict[tuple[Index, Index], Embedding]

    @property
    def top(self) -> Index:
        return frozenset(range(self.n))

    @property
    def index_sets(self) -> list[Index]:
        return sorted(self.structures, key=index_key)

    @property
    def maximal(self) -> list[Index]:
        sets = self.index_sets
        return [p for p in sets if not any(p < q for q in sets)]

    def map(self, p: Index, q: Index) -> Embedding | None:
        if (p, q) in self.maps:
            return self.maps[p, q]
        if p == q:
            return Embedding.identity(self.structures[p])
        return None

    def is_base(self) -> bool:
        """Indexed by every proper subset of ``0..n-1``."""
        return len(self.structures) == 2**self.n - 1 and self.top not in self.structures

    def extended(self, top: Structure, into_top: dict[Index, Sequence[int]]) -> PSystem:
        """This system plus ``A_n = top`` with the given maps ``A_p → top``."""
        maps = dict(self.maps)
        for p, m in into_top.items():
            maps[p, self.top] = Embedding(self.structures[p], top, tuple(m))
        return PSystem(n=self.n, structures={**self.structures, self.top: top}, maps=maps)

    def relabeled(self, structures: dict[Index, Structure]) -> PSystem:
        """Same maps over new structures on the same universes (e.g. reducts)."""
        maps = {
            (p, q): Embedding(structures[p], structures[q], e.map) for (p, q), e in self.maps.items()
        }
        return PSystem(n=self.n, structures=structures, maps=maps)


@dataclass(slots=True, frozen=True)
class PSystemViolation:
    axiom: str
    detail: str
    witness: Any = None


@dataclass(slots=True, frozen=True)
class Colimit:
    """Glued universe of a system; ``origin[x]`` is the minimal index set whose structure contains ``x``."""

    structure: Structure
    inclusions: dict[Index, Embedding]
    origin: tuple[Index, ...]

    def image(self, p: Index) -> frozenset[int]:
        return self.inclusions[p].image


def subsets_of(items: Iterable[int]) -> list[Index]:
    """Every subset, ordered by ``index_key``."""
    return [frozenset(s) for s in subsets(sorted(items))]
