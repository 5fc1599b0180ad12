"""Assemblies, product structures and decomposition outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from apps.classes.specs import ProductSignature
from apps.kernel.exceptions import SignatureError
from apps.kernel.structures import Embedding, Signature, Structure

type Point = tuple[int, int]


# ─── Assemblies ─────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, kw_only=True)
class LexAssembly:
    """Base ``B`` over the right factor's symbols, one fiber per base element over the left's.

    ``coordinates`` (optional) records, for a decomposed structure, the
    ``(a, b)`` position of each of its elements.
    """

    base: Structure
    fibers: tuple[Structure, ...]
    fiber_sig: Signature
    coordinates: tuple[Point, ...] = ()

    def __post_init__(self) -> None:
        if len(self.fibers) != self.base.size:
            msg = f"{len(self.fibers)} fibers for a base of size {self.base.size}"
            raise SignatureError(msg)
        for f in self.fibers:
            if f.sig != self.fiber_sig:
                msg = f"fiber over [{f.sig.describe()}], expected [{self.fiber_sig.describe()}]"
                raise SignatureError(msg)

    @classmethod
    def uniform(cls, fiber: Structure, base: Structure) -> LexAssembly:
        return cls(base=base, fibers=(fiber,) * base.size, fiber_sig=fiber.sig)

    @property
    def size(self) -> int:
        return sum(f.size for f in self.fibers)


@dataclass(slots=True, frozen=True)
class FullAssembly:
    left: Structure
    right: Structure


@dataclass(slots=True, frozen=True)
class Superposition:
    """``aligner[a]`` is the right-hand element laid over left-hand element ``a``."""

    left: Structure
    right: Structure
    aligner: tuple[int, ...]


@dataclass(slots=True, frozen=True)
class ProductStructure:
    """A built product plus the coordinates of each element and the symbol naming."""

    structure: Structure
    points: tuple[Point, ...]
    naming: ProductSignature
    _index: dict[Point, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def index(self, point: Point) -> int:
        return self._index[point]

    @property
    def rename_map(self) -> dict[str, dict[str, str]]:
        return {"left": self.naming.left.renamed, "right": self.naming.right.renamed}


# ─── Decomposition outcomes ─────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class Rejection:
    reason: str
    witness: Any = None


@dataclass(slots=True, frozen=True)
class Inconclusive:
    reason: str


@dataclass(slots=True, frozen=True, kw_only=True)
class FullDecomposition:
    """Quotients by ``E0`` / ``E1`` with hosts ``D ⊇ Q0`` and ``B ⊇ Q1``.

    ``coordinates[x]`` is ``(E0-class, E1-class)`` of element ``x``.
    """

    q0: Structure
    q1: Structure
    host0: Embedding
    host1: Embedding
    coordinates: tuple[Point, ...]

    def embedding_into_hosts(self) -> tuple[int, ...]:
        """Position of each element inside ``host0.target ⊠ host1.target``."""
        width = self.host1.target.size
        return tuple(self.host0(i) * width + self.host1(j) for i, j in self.coordinates)


@dataclass(slots=True, frozen=True)
class SuperDecomposition:
    left: Structure
    right: Structure
