"""Colorings, self-similarity instances and the witnesses found for them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from apps.kernel.exceptions import EmbeddingError, StructureError
from apps.kernel.services.ages import QfClassSelector, qf_class
from apps.kernel.structures import Embedding, Structure, embedding_defect
from apps.partition.exceptions import ColoringError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence


@dataclass(slots=True, frozen=True)
class Coloring:
    domain: Structure
    k: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            msg = f"a coloring needs at least two colors, got {self.k}"
            raise ColoringError(msg)
        if len(self.assignment) != self.domain.size:
            msg = f"{len(self.assignment)} colors for {self.domain.size} elements"
            raise ColoringError(msg)
        if any(not 0 <= c < self.k for c in self.assignment):
            msg = f"color out of range 0..{self.k - 1}: {list(self.assignment)}"
            raise ColoringError(msg)

    def __call__(self, x: int) -> int:
        return self.assignment[x]

    def is_monochromatic(self, elems: Iterable[int]) -> bool:
        return len({self.assignment[x] for x in elems}) <= 1


@dataclass(slots=True, frozen=True, kw_only=True)
class DssInstance:
    """``f : A → B`` and ``g : A → C`` with ``g(A)`` inside the qf-class of ``pivot`` over ``base``."""

    a: Structure
    b: Structure
    c: Structure
    f: Embedding
    base: frozenset[int]
    pivot: int
    g: Embedding

    def __post_init__(self) -> None:
        for name, e, target in (("f", self.f, self.b), ("g", self.g, self.c)):
            if e.source != self.a or e.target != target:
                msg = f"{name} does not start at A or end at the right structure"
                raise EmbeddingError(msg)
            if (reason := embedding_defect(self.a, target, e.map)) is not None:
                msg = f"{name}: {reason}"
                raise EmbeddingError(msg)
        if not self.g.image <= self.qf_class:
            msg = f"g(A) = {sorted(self.g.image)} leaves the qf-class of {self.pivot} over {sorted(self.base)}"
            raise StructureError(msg)

    @classmethod
    def of(
        cls,
        a: Structure,
        b: Structure,
        c: Structure,
        f: Sequence[int],
        base: Iterable[int],
        pivot: int,
        g: Sequence[int],
    ) -> DssInstance:
        return cls(
            a=a, b=b, c=c, f=Embedding(a, b, tuple(f)), base=frozenset(base), pivot=pivot, g=Embedding(a, c, tuple(g)),
        )

    @property
    def selector(self) -> QfClassSelector:
        return QfClassSelector(self.c, self.base, self.pivot)

    @property
    def qf_class(self) -> frozenset[int]:
        return qf_class(self.selector)

    @property
    def extra(self) -> tuple[int, ...]:
        """Elements of ``B`` outside ``f(A)``."""
        image = self.f.image
        return tuple(y for y in self.b.universe if y not in image)


@dataclass(slots=True, frozen=True)
class DssWitness:
    """``D`` with ``j : C → D`` and ``h : B → D`` such that ``h ∘ f = j ∘ g``."""

    d: Structure
    j: Embedding
    h: Embedding


@dataclass(slots=True, frozen=True)
class ProductWitness:
    """A witness assembled from one witness per factor."""

    structure: Structure
    left: Structure
    right: Structure
    colors: tuple[int, int]


@dataclass(slots=True, frozen=True)
class PatternOutcome:
    pattern: Structure
    witness: Structure | None
