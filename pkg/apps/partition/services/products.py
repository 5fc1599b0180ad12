# apps/partition/services/products.py
# ================================================================================
"""
Indivisibility witnesses for product classes.

``lex_indivisibility_witness`` joins the fibers of the pattern into one
structure ``D`` and returns ``D′ ≀ B′`` for witnesses ``D′`` of ``D`` and
``B′`` of the base.  ``full_indivisibility_witness`` returns ``D′ ⊠ B′``; the
right-hand witness must absorb one color per (color, copy of ``D`` in ``D′``)
pair.  Free superpositions have no builder, only ``search_super_indivisibility``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.amalgamation.datatype import AmalgInstance, Unresolved
from apps.amalgamation.services.builders import search_oracle
from apps.classes.services.enumeration import enumerate_members_upto
from apps.classes.services.membership import enumeration_limit
from apps.classes.specs import ClassKind, super_class
from apps.kernel.conf import current_limits
from apps.kernel.services.embeddings import embedding_images
from apps.kernel.structures import Structure
from apps.partition.datatype import PatternOutcome, ProductWitness
from apps.partition.exceptions import HypothesisError, WitnessError
from apps.partition.services.coloring import find_indivisibility_witness
from apps.products.datatype import FullDecomposition, Inconclusive, LexAssembly
from apps.products.services.assembly import full_product, lex_product
from apps.products.services.decompose import decompose_full, decompose_lex

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from apps.amalgamation.services.builders import AmalgamOracle
    from apps.classes.specs import ClassSpec

log = structlog.get_logger(__name__).bind(component="ProductWitnesses")

type WitnessOracle = Callable[[ClassSpec, Structure, int], Structure | None]


def search_witness_oracle(max_size: int | None = None) -> WitnessOracle:
    """``find_indivisibility_witness`` up to ``max_size``, or up to the class's enumeration limit."""

    def oracle(k: ClassSpec, a: Structure, colors: int) -> Structure | None:
        return find_indivisibility_witness(k, a, colors, max_size if max_size is not None else enumeration_limit(k))

    return oracle


def _require_kind(k: ClassSpec, kind: ClassKind) -> tuple[ClassSpec, ClassSpec]:
    if k.kind is not kind:
        msg = f"{k} is not a {kind} product class"
        raise HypothesisError(msg)
    return k.factors


# ─── Lexicographic ──────────────────────────────────────────────────────────────


def _join(k0: ClassSpec, fibers: Sequence[Structure], oracle: AmalgamOracle) -> Structure | Unresolved:
    """One member of ``k0`` into which every fiber embeds."""
    empty = Structure.empty(k0.sig, 0)
    joined = fibers[0] if fibers else empty
    for fiber in fibers[1:]:
        inst = AmalgInstance.joint(empty, joined, fiber)
        if (am := oracle(k0, inst, False)) is None:
            return Unresolved(f"fibers have no joint embedding in {k0}", inst)
        joined = am.c
    return joined


def lex_indivisibility_witness(
    k: ClassSpec,
    a: Structure,
    colors: int,
    *,
    jep_oracle: AmalgamOracle | None = None,
    witness_oracle: WitnessOracle | None = None,
) -> ProductWitness | Unresolved:
    k0, k1 = _require_kind(k, ClassKind.LEX)
    parts = decompose_lex(a, k0, k1)
    if not isinstance(parts, LexAssembly):
        msg = f"pattern is not in {k}: {parts.reason}"
        raise WitnessError(msg)
    witness_oracle = witness_oracle or search_witness_oracle()

    joined = _join(k0, parts.fibers, jep_oracle or search_oracle())
    if isinstance(joined, Unresolved):
        return joined
    if (left := witness_oracle(k0, joined, colors)) is None:
        return Unresolved(f"no witness for the joined fibers in {k0}", joined)
    if (right := witness_oracle(k1, parts.base, colors)) is None:
        return Unresolved(f"no witness for the base in {k1}", parts.base)

    built = lex_product(left, right).structure
    log.debug("lex witness built", size=built.size, left=left.size, right=right.size, colors=colors)
    return ProductWitness(built, left, right, (colors, colors))


# ─── Full ───────────────────────────────────────────────────────────────────────


def full_indivisibility_witness(
    k: ClassSpec, a: Structure, colors: int, *, witness_oracle: WitnessOracle | None = None,
) -> ProductWitness | Unresolved:
    """``D′ ⊠ B′``; ``B′`` is searched with ``colors × |images of D in D′|`` colors."""
    k0, k1 = _require_kind(k, ClassKind.FULL)
    parts = decompose_full(a, k0, k1, bound=current_limits().WITNESS_MAX_SIZE)
    if isinstance(parts, Inconclusive):
        return Unresolved(f"pattern hosts not found: {parts.reason}", a)
    if not isinstance(parts, FullDecomposition):
        msg = f"pattern is not in {k}: {parts.reason}"
        raise WitnessError(msg)
    witness_oracle = witness_oracle or search_witness_oracle()

    d, b = parts.host0.target, parts.host1.target
    if (left := witness_oracle(k0, d, colors)) is None:
        return Unresolved(f"no witness for the left host in {k0}", d)
    wide = colors * max(1, len(embedding_images(d, left)))
    if (right := witness_oracle(k1, b, wide)) is None:
        return Unresolved(f"no witness for the right host in {k1} with {wide} colors", b)

    built = full_product(left, right).structure
    log.debug("full witness built", size=built.size, left=left.size, right=right.size, colors=wide)
    return ProductWitness(built, left, right, (colors, wide))


# ─── Free superposition ─────────────────────────────────────────────────────────


def search_super_indivisibility(
    k0: ClassSpec, k1: ClassSpec, max_pattern: int, colors: int, max_size: int, *, jobs: int | None = None,
) -> list[PatternOutcome]:
    """Witness search for every non-empty pattern of ``k0 * k1``; reports per pattern, never a class verdict."""
    k = super_class(k0, k1)
    outcomes = []
    for pattern in enumerate_members_upto(k, max_pattern):
        if pattern.size == 0:
            continue
        witness = find_indivisibility_witness(k, pattern, colors, max_size, jobs=jobs)
        outcomes.append(PatternOutcome(pattern, witness))
    found = sum(o.witness is not None for o in outcomes)
    log.info("super indivisibility search", cls=str(k), patterns=len(outcomes), found=found, max_size=max_size)
    return outcomes
