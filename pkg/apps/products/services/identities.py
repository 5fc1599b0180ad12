# apps/products/services/identities.py
# ================================================================================
"""
Identities relating products to their factors, checked on finite inputs.

* ages commute with ≀ and ⊠
* |Aut(A ≀ B)| = |Aut A|^|B| · |Aut B| and |Aut(A ⊠ B)| = |Aut A| · |Aut B|
* embeddings between products factor coordinatewise
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Literal

import structlog

from apps.kernel.conf import current_limits
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.exceptions import LimitExceededError, StructureError
from apps.kernel.services.ages import age_of
from apps.kernel.services.canonical import canonical_form, structure_of
from apps.kernel.services.embeddings import aut_order
from apps.products.datatype import LexAssembly
from apps.products.services.assembly import full_product, lex_product, lex_structure

if TYPE_CHECKING:
    from sortedcontainers import SortedSet

    from apps.kernel.services.canonical import CanonicalForm
    from apps.kernel.structures import Embedding, Signature, Structure
    from apps.products.datatype import ProductStructure

log = structlog.get_logger(__name__).bind(component="ProductIdentities")

type Mode = Literal["lex", "full"]


# ─── Ages ───────────────────────────────────────────────────────────────────────


def _nonempty_reps(forms: SortedSet[CanonicalForm]) -> list[Structure]:
    return [structure_of(cf) for cf in forms if cf.size > 0]


def _lex_age_product(
    fiber_sig: Signature, age_a: SortedSet[CanonicalForm], age_b: SortedSet[CanonicalForm], size: int,
) -> set[CanonicalForm]:
    fibers = _nonempty_reps(age_a)
    found: set[CanonicalForm] = set()
    for base_form in age_b:
        base = structure_of(base_form)
        if base.size > size:
            continue
        if base.size == 0:
            found.add(canonical_form(lex_structure(LexAssembly(base=base, fibers=(), fiber_sig=fiber_sig)).structure))
            continue
        for choice in product(fibers, repeat=base.size):
            if sum(f.size for f in choice) <= size:
                asm = LexAssembly(base=base, fibers=choice, fiber_sig=fiber_sig)
                found.add(canonical_form(lex_structure(asm).structure))
    return found


def _full_age_product(age_a: SortedSet[CanonicalForm], age_b: SortedSet[CanonicalForm], size: int) -> set[CanonicalForm]:
    found: set[CanonicalForm] = set()
    for fa in age_a:
        for fb in age_b:
            found.update(age_of(full_product(structure_of(fa), structure_of(fb)).structure, size))
    return found


def age_product_check(a: Structure, b: Structure, mode: Mode, size: int) -> CheckReport:
    """Age of the product equals the product of the ages, compared up to ``size``."""
    if mode == "lex":
        built = lex_product(a, b).structure
        expected = _lex_age_product(a.sig, age_of(a, size), age_of(b, size), size)
    else:
        built = full_product(a, b).structure
        expected = _full_age_product(age_of(a, size), age_of(b, size), size)
    actual = set(age_of(built, size))

    stats = {"age": len(actual), "product_of_ages": len(expected)}
    if missing := sorted(expected - actual):
        return CheckReport(verdict=Verdict.FAIL, detail="product of ages has a structure the age lacks",
                           witness=structure_of(missing[0]), stats=stats)
    if extra := sorted(actual - expected):
        return CheckReport(verdict=Verdict.FAIL, detail="age has a structure outside the product of ages",
                           witness=structure_of(extra[0]), stats=stats)
    return CheckReport(verdict=Verdict.PASS, detail=f"{mode} ages agree up to size {size}", stats=stats)


# ─── Automorphism orders ────────────────────────────────────────────────────────


def aut_order_product_check(a: Structure, b: Structure) -> CheckReport:
    if a.size == 0 or b.size == 0:
        msg = "automorphism order identities need non-empty factors"
        raise StructureError(msg)
    limit = current_limits().AUT_PRODUCT_MAX_SIZE
    if a.size * b.size > limit:
        raise LimitExceededError("automorphism product size", a.size * b.size, limit)

    oa, ob = aut_order(a), aut_order(b)
    lex_actual, full_actual = aut_order(lex_product(a, b).structure), aut_order(full_product(a, b).structure)
    lex_expected, full_expected = oa ** b.size * ob, oa * ob
    stats = {"lex": lex_actual, "lex_expected": lex_expected, "full": full_actual, "full_expected": full_expected}
    if lex_actual != lex_expected:
        return CheckReport(verdict=Verdict.FAIL, detail=f"|Aut(a≀b)| = {lex_actual}, expected {lex_expected}",
                           stats=stats)
    if full_actual != full_expected:
        return CheckReport(verdict=Verdict.FAIL, detail=f"|Aut(a⊠b)| = {full_actual}, expected {full_expected}",
                           stats=stats)
    return CheckReport(verdict=Verdict.PASS, detail=f"≀ order {lex_actual}, ⊠ order {full_actual}", stats=stats)


# ─── Embedding factorization ────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class FullFactorization:
    left: tuple[int, ...]
    right: tuple[int, ...]


@dataclass(slots=True, frozen=True)
class LexFactorization:
    base: tuple[int, ...]
    fibers: tuple[tuple[int, ...], ...]


def factor_full_embedding(e: Embedding, source: ProductStructure, target: ProductStructure) -> FullFactorization | None:
    """``(g, h)`` with ``e(a, b) = (g(a), h(b))``, or ``None``."""
    left: dict[int, int] = {}
    right: dict[int, int] = {}
    for x, (a, b) in enumerate(source.points):
        ga, hb = target.points[e(x)]
        if left.setdefault(a, ga) != ga or right.setdefault(b, hb) != hb:
            return None
    return FullFactorization(tuple(left[a] for a in sorted(left)), tuple(right[b] for b in sorted(right)))


def factor_lex_embedding(e: Embedding, source: ProductStructure, target: ProductStructure) -> LexFactorization | None:
    """``g`` on the base and ``h_b`` per fiber with ``e(a, b) = (h_b(a), g(b))``, or ``None``."""
    base: dict[int, int] = {}
    fibers: dict[int, dict[int, int]] = {}
    for x, (a, b) in enumerate(source.points):
        ha, gb = target.points[e(x)]
        if base.setdefault(b, gb) != gb:
            return None
        fibers.setdefault(b, {})[a] = ha
    return LexFactorization(
        tuple(base[b] for b in sorted(base)),
        tuple(tuple(fibers[b][a] for a in sorted(fibers[b])) for b in sorted(fibers)),
    )

