# apps/products/services/decompose.py
# ================================================================================
"""
Membership in product classes by decomposition.

``decompose_lex``   – read ``E`` as fibers, check the fibers and the quotient
``decompose_full``  – read ``E0`` / ``E1`` as coordinates, find host factors
``decompose_super`` – split into the two reducts

Each returns a witness or a ``Rejection``; the full case may also return
``Inconclusive`` when a non-hereditary factor needs a host beyond the bound.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.classes.services.membership import contains, enumeration_limit, explain_membership, known_hereditary
from apps.classes.specs import ClassKind, ProductSignature, SymbolMap, product_signature
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.ages import CongruenceViolation, blocks_of, quotient_by_congruence
from apps.kernel.services.embeddings import find_embedding
from apps.kernel.structures import Embedding, Structure, induced_substructure
from apps.products.datatype import (
    FullDecomposition,
    Inconclusive,
    LexAssembly,
    Rejection,
    SuperDecomposition,
)

if TYPE_CHECKING:
    from apps.classes.specs import ClassSpec

log = structlog.get_logger(__name__).bind(component="Decompose")


def _naming(kind: ClassKind, s: Structure, k0: ClassSpec, k1: ClassSpec) -> ProductSignature:
    naming = product_signature(kind, k0.sig, k1.sig)
    if s.sig != naming.sig:
        msg = f"structure over [{s.sig.describe()}] is not over the {kind} signature [{naming.sig.describe()}]"
        raise SignatureError(msg)
    return naming


def _factor_reduct(s: Structure, names: SymbolMap) -> Structure:
    return s.reduct(names.targets, rename=names.backward)


# ─── Lexicographic ──────────────────────────────────────────────────────────────


def decompose_lex(s: Structure, k0: ClassSpec, k1: ClassSpec) -> LexAssembly | Rejection:
    naming = _naming(ClassKind.LEX, s, k0, k1)
    blocks = blocks_of(s.rel("E"), s.size)
    if blocks is None:
        return Rejection("E not equivalence")

    class_of = {x: i for i, block in enumerate(blocks) for x in block}
    for name in naming.left.targets:
        for t in sorted(s.rel(name)):
            if len({class_of[x] for x in t}) > 1:
                return Rejection("cross-class L0 tuple", (name, t))

    quotient = quotient_by_congruence(s, blocks, naming.right.targets)
    if isinstance(quotient, CongruenceViolation):
        return Rejection("L1 not an E-congruence", quotient)

    base = quotient.structure.reduct(naming.right.targets, rename=naming.right.backward)
    fibers = tuple(_factor_reduct(induced_substructure(s, block)[0], naming.left) for block in blocks)
    if not (verdict := explain_membership(k1, base)):
        return Rejection(f"quotient not in {k1}: {verdict.reason}", base)
    for b, fiber in enumerate(fibers):
        if not (verdict := explain_membership(k0, fiber)):
            return Rejection(f"fiber {b} not in {k0}: {verdict.reason}", fiber)

    coordinates = [(0, 0)] * s.size
    for b, block in enumerate(blocks):
        for a, x in enumerate(block):
            coordinates[x] = (a, b)
    return LexAssembly(base=base, fibers=fibers, fiber_sig=k0.sig, coordinates=tuple(coordinates))


# ─── Full ───────────────────────────────────────────────────────────────────────


def _host(q: Structure, k: ClassSpec, bound: int) -> Embedding | Rejection | Inconclusive:
    if contains(k, q):
        return Embedding.identity(q)
    if known_hereditary(k):
        return Rejection(f"quotient not in hereditary {k}", q)
    top = min(bound, enumeration_limit(k))
    from apps.classes.services.enumeration import enumerate_members

    for n in range(q.size + 1, top + 1):
        for host in enumerate_members(k, n):
            if (e := find_embedding(q, host)) is not None:
                return e
    return Inconclusive(f"no member of {k} up to size {top} hosts the quotient")


def decompose_full(
    s: Structure, k0: ClassSpec, k1: ClassSpec, bound: int,
) -> FullDecomposition | Rejection | Inconclusive:
    naming = _naming(ClassKind.FULL, s, k0, k1)
    blocks0 = blocks_of(s.rel("E0"), s.size)
    blocks1 = blocks_of(s.rel("E1"), s.size)
    if blocks0 is None:
        return Rejection("E0 not equivalence")
    if blocks1 is None:
        return Rejection("E1 not equivalence")

    for b0 in blocks0:
        for b1 in blocks1:
            if len(shared := sorted(set(b0) & set(b1))) > 1:
                return Rejection("class intersection > 1", tuple(shared[:2]))

    quotients = []
    for blocks, names, label in ((blocks0, naming.left, "L0"), (blocks1, naming.right, "L1")):
        q = quotient_by_congruence(s, blocks, names.targets)
        if isinstance(q, CongruenceViolation):
            return Rejection(f"{label} not a congruence", q)
        quotients.append(q)

    q0 = quotients[0].structure.reduct(naming.left.targets, rename=naming.left.backward)
    q1 = quotients[1].structure.reduct(naming.right.targets, rename=naming.right.backward)
    hosts = []
    for q, k in ((q0, k0), (q1, k1)):
        found = _host(q, k, bound)
        if not isinstance(found, Embedding):
            return found
        hosts.append(found)

    coordinates = tuple(zip(quotients[0].class_of, quotients[1].class_of, strict=True))
    return FullDecomposition(q0=q0, q1=q1, host0=hosts[0], host1=hosts[1], coordinates=coordinates)


def full_embeddability_oracle(s: Structure, k0: ClassSpec, k1: ClassSpec, max_factor_size: int) -> bool:
    """Brute force: some ``D ∈ k0``, ``B ∈ k1`` up to the size bound with ``s ↪ D ⊠ B``."""
    from apps.classes.services.enumeration import enumerate_members_upto
    from apps.products.services.assembly import full_product

    _naming(ClassKind.FULL, s, k0, k1)
    for d in enumerate_members_upto(k0, max_factor_size):
        for b in enumerate_members_upto(k1, max_factor_size):
            if d.size * b.size >= s.size and find_embedding(s, full_product(d, b).structure) is not None:
                return True
    return False


# ─── Superposition ──────────────────────────────────────────────────────────────


def decompose_super(s: Structure, k0: ClassSpec, k1: ClassSpec) -> SuperDecomposition | Rejection:
    naming = _naming(ClassKind.SUPER, s, k0, k1)
    left, right = _factor_reduct(s, naming.left), _factor_reduct(s, naming.right)
    for side, k, reduct in ((0, k0, left), (1, k1, right)):
        if not (verdict := explain_membership(k, reduct)):
            return Rejection(f"reduct {side} not in {k}: {verdict.reason}", reduct)
    return SuperDecomposition(left, right)
