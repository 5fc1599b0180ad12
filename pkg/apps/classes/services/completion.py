# apps/classes/services/completion.py
# ================================================================================
"""
Completion engine.

A ``PartialStructure`` fixes some of the truth table of a structure and leaves
the rest free:

* tuples whose entries all lie inside one *region* are decided by ``true_tuples``;
* *pinned* tuples carry an explicit truth value;
* when *scopes* are given, a free tuple whose entries fit in no scope is false;
* every other tuple is free.

``complete`` walks the elements in order.  At element ``v`` it visits each set
``S ∪ {v}`` (``S`` earlier elements, colex order) and tries every assignment of
the free tuples whose entry set is exactly that set, fewest tuples first.  For
hereditary classes the induced substructure on the set is checked against the
class's small members straight away; the finished structure is always checked
with ``contains``.  Output order is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from itertools import product
from typing import TYPE_CHECKING

import structlog

from apps.classes.conf import LOCAL_CHECK_SIZE, UNPRUNED_MAX_FREE_TUPLES
from apps.classes.services.membership import contains, known_hereditary
from apps.kernel.conf import check_deadline, current_limits
from apps.kernel.exceptions import LimitExceededError, StructureError
from apps.kernel.services.canonical import CanonicalForm, canonical_form
from apps.kernel.structures import Signature, Structure, Tup
from common.iterables_utils import colex_subsets

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

    from apps.classes.specs import ClassSpec

log = structlog.get_logger(__name__).bind(component="Completion")


@dataclass(slots=True, frozen=True, kw_only=True)
class PartialStructure:
    sig: Signature
    size: int
    true_tuples: tuple[frozenset[Tup], ...]
    regions: tuple[frozenset[int], ...] = ()
    pinned: tuple[frozenset[Tup], ...] = ()
    pinned_false: tuple[frozenset[Tup], ...] = ()
    scopes: tuple[frozenset[int], ...] | None = None
    _region_of: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        n = self.size
        for region in (*self.regions, *(self.scopes or ())):
            if any(not 0 <= x < n for x in region):
                msg = f"region {sorted(region)} leaves 0..{n - 1}"
                raise StructureError(msg)
        index: dict[int, list[int]] = {}
        for r, region in enumerate(self.regions):
            for x in region:
                index.setdefault(x, []).append(r)
        object.__setattr__(self, "_region_of", {x: tuple(rs) for x, rs in index.items()})

    # -- constructors -------------------------------------------------------------
    @classmethod
    def blank(cls, sig: Signature, size: int) -> PartialStructure:
        empty = tuple(frozenset() for _ in sig.symbols)
        return cls(sig=sig, size=size, true_tuples=empty)

    @classmethod
    def over(
        cls,
        sig: Signature,
        size: int,
        placed: Iterable[tuple[Structure, tuple[int, ...]]],
        *,
        pinned: Mapping[tuple[str, Tup], bool] | None = None,
        scopes: Iterable[Iterable[int]] | None = None,
    ) -> PartialStructure:
        """Copies of structures placed at the given positions become fixed regions.

        Placements must agree where they overlap.
        """
        true: list[set[Tup]] = [set() for _ in sig.symbols]
        regions = []
        placed = list(placed)
        for s, positions in placed:
            if s.sig != sig:
                msg = "placed structure has a different signature"
                raise StructureError(msg)
            for k, rel in enumerate(s.relations):
                true[k].update(tuple(positions[x] for x in t) for t in rel)
            regions.append(frozenset(positions))
        if not placements_agree(sig, placed):
            msg = "placed structures disagree on their overlap"
            raise StructureError(msg)
        on: list[set[Tup]] = [set() for _ in sig.symbols]
        off: list[set[Tup]] = [set() for _ in sig.symbols]
        for (name, tup), value in (pinned or {}).items():
            (on if value else off)[sig.index(name)].add(tuple(tup))
        return cls(
            sig=sig,
            size=size,
            true_tuples=tuple(frozenset(t) for t in true),
            regions=tuple(regions),
            pinned=tuple(frozenset(t) for t in on),
            pinned_false=tuple(frozenset(t) for t in off),
            scopes=None if scopes is None else tuple(frozenset(sc) for sc in scopes),
        )

    # -- queries ------------------------------------------------------------------
    def in_region(self, elems: Iterable[int]) -> bool:
        elems = list(elems)
        if not elems:
            return bool(self.regions)
        shared = set(self._region_of.get(elems[0], ()))
        for x in elems[1:]:
            shared &= set(self._region_of.get(x, ()))
            if not shared:
                return False
        return bool(shared)

    def in_scope(self, elems: frozenset[int]) -> bool:
        return self.scopes is None or any(elems <= sc for sc in self.scopes)


def placements_agree(sig: Signature, placed: Iterable[tuple[Structure, tuple[int, ...]]]) -> bool:
    """Placed copies induce the same tuples on every pairwise overlap."""
    items = list(placed)
    for i, (s, pos) in enumerate(items):
        for t_struct, t_pos in items[i + 1 :]:
            shared = set(pos) & set(t_pos)
            if not shared:
                continue
            back_s = {y: x for x, y in enumerate(pos)}
            back_t = {y: x for x, y in enumerate(t_pos)}
            common = sorted(shared)
            for k, (_, arity) in enumerate(sig.symbols):
                for t in product(common, repeat=arity):
                    in_s = tuple(back_s[y] for y in t) in s.relations[k]
                    in_t = tuple(back_t[y] for y in t) in t_struct.relations[k]
                    if in_s != in_t:
                        return False
    return True


# ─── Planning ───────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class _Step:
    elems: tuple[int, ...]
    free: tuple[tuple[int, Tup], ...]
    check: bool


def _tuples_on(elems: tuple[int, ...], arity: int) -> list[Tup]:
    target = set(elems)
    return [t for t in product(elems, repeat=arity) if set(t) == target]


def _plan(partial: PartialStructure, check_size: int) -> list[_Step]:
    sig = partial.sig
    reach = max(sig.max_arity, check_size)
    steps = []
    for v in range(partial.size):
        for s in colex_subsets(list(range(v)), reach - 1):
            elems = (*s, v)
            entry_set = frozenset(elems)
            free: list[tuple[int, Tup]] = []
            if len(elems) <= sig.max_arity and not partial.in_region(elems) and partial.in_scope(entry_set):
                for k, (_, arity) in enumerate(sig.symbols):
                    for t in _tuples_on(elems, arity):
                        pinned = (partial.pinned and t in partial.pinned[k]) or (
                            partial.pinned_false and t in partial.pinned_false[k]
                        )
                        if not pinned:
                            free.append((k, t))
            check = len(elems) <= check_size and not partial.in_region(elems)
            if free or check:
                steps.append(_Step(elems, tuple(free), check))
    return steps


def _initial_truth(partial: PartialStructure) -> list[set[Tup]]:
    truth = [set(rel) for rel in partial.true_tuples]
    for k, rel in enumerate(partial.pinned):
        truth[k].update(rel)
    return truth


def _induced(sig: Signature, truth: list[set[Tup]], elems: tuple[int, ...]) -> Structure:
    pos = {x: i for i, x in enumerate(elems)}
    rels = []
    for (_, arity), rel in zip(sig.symbols, truth, strict=True):
        rels.append(frozenset(tuple(pos[x] for x in t) for t in product(elems, repeat=arity) if t in rel))
    return Structure(sig, len(elems), tuple(rels))


# ─── Engine ─────────────────────────────────────────────────────────────────────


def local_check_size(k: ClassSpec) -> int:
    return max(LOCAL_CHECK_SIZE, k.sig.max_arity)


def complete(
    k: ClassSpec,
    partial: PartialStructure,
    *,
    local_forms: frozenset[CanonicalForm] | None = None,
    check_size: int | None = None,
) -> Iterator[Structure]:
    """Every member of ``k`` extending ``partial``, in deterministic order.

    With ``local_forms`` (hereditary classes only) each visited set of at most
    ``check_size`` elements must induce one of those forms.
    """
    if partial.sig != k.sig:
        msg = "partial structure and class disagree on the signature"
        raise StructureError(msg)
    pruning = local_forms is not None
    size = check_size if check_size is not None else (local_check_size(k) if pruning else 0)
    steps = _plan(partial, size if pruning else 0)
    max_free = current_limits().COMPLETION_MAX_FREE_TUPLES
    widest = max((len(st.free) for st in steps), default=0)
    if widest > max_free:
        raise LimitExceededError("free tuples per completion step", widest, max_free)
    if not pruning and (total := sum(len(st.free) for st in steps)) > UNPRUNED_MAX_FREE_TUPLES:
        raise LimitExceededError("free tuples without hereditary pruning", total, UNPRUNED_MAX_FREE_TUPLES)

    sig, n = partial.sig, partial.size
    truth = _initial_truth(partial)
    log.debug("completion start", size=n, steps=len(steps), pruning=pruning)

    def rec(i: int) -> Iterator[Structure]:
        check_deadline()
        if i == len(steps):
            s = Structure(sig, n, tuple(frozenset(r) for r in truth))
            if contains(k, s):
                yield s
            return
        step = steps[i]
        for mask in range(1 << len(step.free)):
            added = [ft for j, ft in enumerate(step.free) if mask >> j & 1]
            for kk, t in added:
                truth[kk].add(t)
            if not (pruning and step.check) or canonical_form(_induced(sig, truth, step.elems)) in local_forms:  # type: ignore[operator]
                yield from rec(i + 1)
            for kk, t in added:
                truth[kk].discard(t)

    yield from rec(0)


def completions(k: ClassSpec, partial: PartialStructure) -> Iterator[Structure]:
    """``complete`` with local pruning switched on whenever ``k`` is known hereditary."""
    if known_hereditary(k):
        size = local_check_size(k)
        return complete(k, partial, local_forms=member_forms(k, size), check_size=size)
    return complete(k, partial)


def first_completion(k: ClassSpec, partial: PartialStructure) -> Structure | None:
    return next(completions(k, partial), None)


@cache
def member_forms(k: ClassSpec, max_size: int) -> frozenset[CanonicalForm]:
    """Canonical forms of all members with at most ``max_size`` elements (hereditary ``k``)."""
    if max_size < 0:
        return frozenset()
    smaller = member_forms(k, max_size - 1)
    found = set(smaller)
    blank = PartialStructure.blank(k.sig, max_size)
    for s in complete(k, blank, local_forms=smaller, check_size=max_size - 1):
        found.add(canonical_form(s))
    return frozenset(found)
