# apps/products/services/assembly.py
# ================================================================================
"""
Building product structures.

* ``lex_structure``          – ⊔_b A_b over a base B, elements sorted by (b, a)
* ``full_structure``         – A ⊠ B, elements sorted by (a, b)
* ``superpose_structures``   – the aligner-diagonal of A ⊠ B
"""

from __future__ import annotations

from itertools import product

import structlog

from apps.classes.specs import ClassKind, product_signature
from apps.kernel.exceptions import StructureError
from apps.kernel.structures import Structure, Tup
from apps.products.datatype import FullAssembly, LexAssembly, ProductStructure, Superposition

log = structlog.get_logger(__name__).bind(component="ProductAssembly")


def lex_structure(asm: LexAssembly, *, rename: bool = True) -> ProductStructure:
    naming = product_signature(ClassKind.LEX, asm.fiber_sig, asm.base.sig, rename=rename)
    points = tuple((a, b) for b, fiber in enumerate(asm.fibers) for a in range(fiber.size))
    index = {p: i for i, p in enumerate(points)}
    by_fiber = [[index[a, b] for a in range(fiber.size)] for b, fiber in enumerate(asm.fibers)]

    equal_base = frozenset((x, y) for members in by_fiber for x in members for y in members)
    intra: list[set[Tup]] = [set() for _ in asm.fiber_sig.symbols]
    for b, fiber in enumerate(asm.fibers):
        for k, rel in enumerate(fiber.relations):
            intra[k].update(tuple(by_fiber[b][a] for a in t) for t in rel)
    over_base: list[set[Tup]] = [set() for _ in asm.base.sig.symbols]
    for k, rel in enumerate(asm.base.relations):
        for t in rel:
            over_base[k].update(product(*(by_fiber[b] for b in t)))

    relations = (equal_base, *map(frozenset, intra), *map(frozenset, over_base))
    return ProductStructure(Structure(naming.sig, len(points), relations), points, naming)


def full_structure(asm: FullAssembly, *, rename: bool = True) -> ProductStructure:
    a, b = asm.left, asm.right
    naming = product_signature(ClassKind.FULL, a.sig, b.sig, rename=rename)
    width = b.size
    points = tuple((x, y) for x in a.universe for y in b.universe)

    def at(x: int, y: int) -> int:
        return x * width + y

    same_left = frozenset((at(x, y), at(x, z)) for x in a.universe for y in b.universe for z in b.universe)
    same_right = frozenset((at(x, y), at(w, y)) for y in b.universe for x in a.universe for w in a.universe)
    left_rels = [
        frozenset(tuple(at(x, y) for x, y in zip(t, ys, strict=True)) for t in rel for ys in product(b.universe, repeat=len(t)))
        for rel in a.relations
    ]
    right_rels = [
        frozenset(tuple(at(x, y) for x, y in zip(xs, t, strict=True)) for t in rel for xs in product(a.universe, repeat=len(t)))
        for rel in b.relations
    ]
    relations = (same_left, same_right, *left_rels, *right_rels)
    return ProductStructure(Structure(naming.sig, len(points), relations), points, naming)


def superpose_structures(sup: Superposition, *, rename: bool = True) -> ProductStructure:
    left, right, f = sup.left, sup.right, sup.aligner
    if left.size != right.size:
        msg = f"cannot superpose structures of sizes {left.size} and {right.size}"
        raise StructureError(msg)
    if sorted(f) != list(right.universe):
        msg = f"aligner {list(f)} is not a bijection onto the right-hand universe"
        raise StructureError(msg)
    naming = product_signature(ClassKind.SUPER, left.sig, right.sig, rename=rename)
    back = {y: x for x, y in enumerate(f)}
    pulled = [frozenset(tuple(back[y] for y in t) for t in rel) for rel in right.relations]
    points = tuple((x, f[x]) for x in left.universe)
    return ProductStructure(Structure(naming.sig, left.size, (*left.relations, *pulled)), points, naming)


# ─── Shorthands ─────────────────────────────────────────────────────────────────


def lex_product(a: Structure, b: Structure) -> ProductStructure:
    """``a ≀ b`` with every fiber a copy of ``a``."""
    return lex_structure(LexAssembly.uniform(a, b))


def full_product(a: Structure, b: Structure) -> ProductStructure:
    return full_structure(FullAssembly(a, b))


def superpose(a: Structure, b: Structure, aligner: tuple[int, ...] | None = None) -> ProductStructure:
    return superpose_structures(Superposition(a, b, aligner if aligner is not None else tuple(a.universe)))
