# apps/classes/services/membership.py
# ================================================================================
"""Deciding membership, with certificates."""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.classes.datatype import YES, Membership
from apps.classes.exceptions import MembershipError
from apps.classes.services.builtins import builtin_def
from apps.classes.specs import ClassKind, ClassSpec, factor_reducts
from apps.kernel.conf import current_limits
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.embeddings import find_embedding

if TYPE_CHECKING:
    from apps.kernel.structures import Structure

log = structlog.get_logger(__name__).bind(component="Membership")


def explain_membership(k: ClassSpec, s: Structure) -> Membership:
    if s.sig != k.sig:
        msg = f"structure over [{s.sig.describe()}] tested against {k} over [{k.sig.describe()}]"
        raise SignatureError(msg)

    match k.kind:
        case ClassKind.BUILTIN:
            assert k.builtin is not None
            return builtin_def(k.builtin).check(s)
        case ClassKind.FORBIDDEN:
            for i, pattern in enumerate(k.forbidden):
                if (e := find_embedding(pattern, s)) is not None:
                    return Membership(member=False, reason=f"induces forbidden pattern #{i}", witness=e)
            return YES
        case ClassKind.LEX:
            return _lex(k, s)
        case ClassKind.FULL:
            return _full(k, s)
        case ClassKind.SUPER:
            return _super(k, s)
    msg = f"unsupported class kind {k.kind!r}"
    raise ValueError(msg)


def contains(k: ClassSpec, s: Structure) -> bool:
    return explain_membership(k, s).member


# ─── Product kinds ──────────────────────────────────────────────────────────────


def _lex(k: ClassSpec, s: Structure) -> Membership:
    from apps.products.datatype import LexAssembly
    from apps.products.services.decompose import decompose_lex

    result = decompose_lex(s, *k.factors)
    if isinstance(result, LexAssembly):
        return Membership(member=True, reason=f"{len(result.fibers)} fibers", witness=result)
    return Membership(member=False, reason=result.reason, witness=result.witness)


def _full(k: ClassSpec, s: Structure) -> Membership:
    from apps.products.datatype import FullDecomposition, Inconclusive
    from apps.products.services.decompose import decompose_full

    result = decompose_full(s, *k.factors, bound=current_limits().WITNESS_MAX_SIZE)
    if isinstance(result, FullDecomposition):
        return Membership(member=True, reason="embeds in a product of hosts", witness=result)
    if isinstance(result, Inconclusive):
        msg = f"membership of a {s.size}-element structure in {k} is undecided: {result.reason}"
        raise MembershipError(msg)
    return Membership(member=False, reason=result.reason, witness=result.witness)


def _super(k: ClassSpec, s: Structure) -> Membership:
    k0, k1 = k.factors
    left, right = factor_reducts(k, s)
    for side, factor, reduct in ((0, k0, left), (1, k1, right)):
        verdict = explain_membership(factor, reduct)
        if not verdict:
            return Membership(member=False, reason=f"reduct {side} not in {factor}: {verdict.reason}", witness=verdict)
    return YES


# ─── Class-level flags ──────────────────────────────────────────────────────────


def known_hereditary(k: ClassSpec) -> bool:
    """Hereditary by construction (no search involved)."""
    match k.kind:
        case ClassKind.BUILTIN | ClassKind.FORBIDDEN | ClassKind.FULL:
            return True
        case ClassKind.LEX | ClassKind.SUPER:
            k0, k1 = k.factors
            return known_hereditary(k0) and known_hereditary(k1)
    return False


def is_graph_like(k: ClassSpec) -> bool:
    match k.kind:
        case ClassKind.BUILTIN:
            assert k.builtin is not None
            return builtin_def(k.builtin).graph_like
        case ClassKind.FORBIDDEN:
            return False
    k0, k1 = k.factors
    return is_graph_like(k0) and is_graph_like(k1)


def enumeration_limit(k: ClassSpec) -> int:
    limits = current_limits()
    return limits.ENUM_MAX_SIZE_GRAPH_LIKE if is_graph_like(k) else limits.ENUM_MAX_SIZE_OTHER
