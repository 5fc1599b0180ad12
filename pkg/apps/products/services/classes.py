# apps/products/services/classes.py
# ================================================================================
"""Members of lexicographic product classes, assembled from factor members."""

from __future__ import annotations

from itertools import product
from typing import TYPE_CHECKING

from apps.classes.services.enumeration import enumerate_members
from apps.products.datatype import LexAssembly
from apps.products.services.assembly import lex_structure

if TYPE_CHECKING:
    from collections.abc import Iterator

    from apps.classes.specs import ClassSpec
    from apps.kernel.structures import Structure


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def lex_members(k: ClassSpec, size: int) -> Iterator[Structure]:
    """Every ``⊔_b A_b`` of ``size`` elements with ``B ∈ k1`` and each ``A_b ∈ k0`` (with repeats)."""
    k0, k1 = k.factors
    for base_size in range(1, size + 1):
        bases = enumerate_members(k1, base_size)
        if not bases:
            continue
        for sizes in _compositions(size, base_size):
            choices = [enumerate_members(k0, n) for n in sizes]
            for base in bases:
                for fibers in product(*choices):
                    asm = LexAssembly(base=base, fibers=fibers, fiber_sig=k0.sig)
                    yield lex_structure(asm).structure
