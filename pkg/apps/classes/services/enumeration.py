# apps/classes/services/enumeration.py
# ================================================================================
"""
Isomorph-free enumeration of class members.

Hereditary classes grow by one-point extension: every member of size ``n``
has a member of size ``n - 1`` below it, so completing each representative of
size ``n - 1`` with one new element and deduplicating by canonical form gives
one representative per isomorphism class.  Lexicographic classes are built
from their decompositions instead; any other class falls back to completing
a blank structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import structlog

from apps.classes.conf import ENUMERATION_CACHE_SIZE
from apps.classes.services.completion import PartialStructure, complete, completions
from apps.classes.services.membership import contains, enumeration_limit, known_hereditary
from apps.classes.specs import ClassKind, ClassSpec
from apps.kernel.conf import check_deadline
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.exceptions import LimitExceededError
from apps.kernel.services.canonical import CanonicalForm, canonical_form, canonical_structure
from apps.kernel.structures import Structure, induced_substructure

log = structlog.get_logger(__name__).bind(component="Enumeration")


def enumerate_members(k: ClassSpec, size: int) -> list[Structure]:
    """One canonical representative per isomorphism class, sorted by canonical form."""
    limit = enumeration_limit(k)
    if size > limit:
        log.warning("enumeration limit hit", cls=str(k), size=size, limit=limit)
        raise LimitExceededError("enumeration size", size, limit)
    return list(_members(k, size))


def enumerate_members_upto(k: ClassSpec, max_size: int) -> list[Structure]:
    return [s for n in range(max_size + 1) for s in enumerate_members(k, n)]


@lru_cache(maxsize=ENUMERATION_CACHE_SIZE)
def _members(k: ClassSpec, size: int) -> tuple[Structure, ...]:
    if size == 0:
        empty = Structure.empty(k.sig, 0)
        return (empty,) if contains(k, empty) else ()

    if k.kind is ClassKind.LEX:
        from apps.products.services.classes import lex_members

        candidates = lex_members(k, size)
    elif known_hereditary(k):
        candidates = (
            s
            for rep in _members(k, size - 1)
            for s in completions(k, PartialStructure.over(k.sig, size, [(rep, tuple(range(size - 1)))]))
        )
    else:
        candidates = complete(k, PartialStructure.blank(k.sig, size))

    found: dict[CanonicalForm, Structure] = {}
    for s in candidates:
        check_deadline()
        cf = canonical_form(s)
        if cf not in found:
            found[cf] = canonical_structure(s)
    log.debug("enumerated", cls=str(k), size=size, count=len(found))
    return tuple(found[cf] for cf in sorted(found))


def singleton_census(k: ClassSpec) -> int:
    return len(enumerate_members(k, 1))


# ─── Hereditary property ────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class HereditaryCounterexample:
    member: Structure
    removed: int
    substructure: Structure


def check_hereditary(k: ClassSpec, size: int) -> CheckReport:
    """Every one-point deletion of every member up to ``size`` is a member."""
    checked = 0
    for n in range(1, size + 1):
        for s in enumerate_members(k, n):
            for x in s.universe:
                sub, _ = induced_substructure(s, [y for y in s.universe if y != x])
                checked += 1
                if not contains(k, sub):
                    witness = HereditaryCounterexample(s, x, sub)
                    return CheckReport(
                        verdict=Verdict.FAIL,
                        detail=f"deleting element {x} of a {n}-element member leaves the class",
                        witness=witness,
                        stats={"deletions": checked},
                    )
    return CheckReport(verdict=Verdict.PASS, detail=f"closed under substructures up to size {size}",
                       stats={"deletions": checked})
