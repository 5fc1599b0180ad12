# apps/kernel/services/embeddings.py
# ================================================================================
"""
Embedding enumeration by backtracking.

Source elements are assigned in order ``0, 1, …`` and candidates are tried in
increasing order, so embeddings come out sorted by their map encoding.  A target
element is a candidate for ``x`` only when its loop pattern matches and its
per-(symbol, position) degrees dominate those of ``x``.  After each assignment
every tuple over the assigned prefix that mentions the new element is checked in
both directions.
"""

from __future__ import annotations

from functools import cache, lru_cache
from itertools import product
from typing import TYPE_CHECKING

import structlog

from apps.kernel.conf import EMBEDDING_PLAN_CACHE_SIZE, check_deadline
from apps.kernel.structures import Embedding, Structure, ensure_same_signature

if TYPE_CHECKING:
    from collections.abc import Collection, Iterator, Mapping

log = structlog.get_logger(__name__).bind(component="Embeddings")

type _Check = tuple[int, tuple[int, ...], bool]


# ─── Plans ──────────────────────────────────────────────────────────────────────


@cache
def _tuples_ending_at(i: int, arity: int) -> tuple[tuple[int, ...], ...]:
    """All ``arity``-tuples over ``0..i`` that mention ``i``."""
    return tuple(t for t in product(range(i + 1), repeat=arity) if i in t)


def _loop_pattern(s: Structure, x: int) -> tuple[bool, ...]:
    return tuple((x,) * arity in rel for (_, arity), rel in zip(s.sig.symbols, s.relations, strict=True))


@lru_cache(maxsize=EMBEDDING_PLAN_CACHE_SIZE)
def _profile(s: Structure) -> tuple[tuple[tuple[bool, ...], tuple[int, ...]], ...]:
    """(loop pattern, degree per symbol and position) for every element."""
    slots = [(k, p) for k, (_, arity) in enumerate(s.sig.symbols) for p in range(arity)]
    offset = {slot: j for j, slot in enumerate(slots)}
    degrees = [[0] * len(slots) for _ in s.universe]
    for k, rel in enumerate(s.relations):
        for t in rel:
            for p, x in enumerate(t):
                degrees[x][offset[k, p]] += 1
    return tuple((_loop_pattern(s, x), tuple(degrees[x])) for x in s.universe)


@lru_cache(maxsize=EMBEDDING_PLAN_CACHE_SIZE)
def _step_checks(s: Structure) -> tuple[tuple[_Check, ...], ...]:
    plan = []
    for i in s.universe:
        step = [
            (k, t, t in rel)
            for k, ((_, arity), rel) in enumerate(zip(s.sig.symbols, s.relations, strict=True))
            for t in _tuples_ending_at(i, arity)
        ]
        plan.append(tuple(step))
    return tuple(plan)


def _candidates(a: Structure, b: Structure) -> list[list[int]]:
    pa, pb = _profile(a), _profile(b)
    out = []
    for loops_x, deg_x in pa:
        out.append(
            [
                y
                for y, (loops_y, deg_y) in enumerate(pb)
                if loops_x == loops_y and all(dx <= dy for dx, dy in zip(deg_x, deg_y, strict=True))
            ],
        )
    return out


# ─── Enumeration ────────────────────────────────────────────────────────────────


def iter_embeddings(
    a: Structure,
    b: Structure,
    *,
    fixed: Mapping[int, int] | None = None,
    domains: Mapping[int, Collection[int]] | None = None,
) -> Iterator[Embedding]:
    """Lazily yield every embedding ``a → b`` in lexicographic map order.

    ``fixed`` pins source elements to target elements; ``domains`` restricts
    the admissible images of individual source elements.
    """
    ensure_same_signature(a, b)
    n, m = a.size, b.size
    if n > m:
        return
    cands = _candidates(a, b)
    for x, allowed in (domains or {}).items():
        keep = set(allowed)
        cands[x] = [y for y in cands[x] if y in keep]
    for x, y in (fixed or {}).items():
        cands[x] = [y] if y in cands[x] else []
    if any(not c for c in cands):
        return

    checks = _step_checks(a)
    rel_b = b.relations
    assignment = [-1] * n
    used = [False] * m

    def extend(i: int) -> Iterator[Embedding]:
        check_deadline()
        if i == n:
            yield Embedding(a, b, tuple(assignment))
            return
        for y in cands[i]:
            if used[y]:
                continue
            assignment[i] = y
            if all((tuple(assignment[x] for x in t) in rel_b[k]) == want for k, t, want in checks[i]):
                used[y] = True
                yield from extend(i + 1)
                used[y] = False
        assignment[i] = -1

    yield from extend(0)


def enumerate_embeddings(a: Structure, b: Structure) -> list[Embedding]:
    return list(iter_embeddings(a, b))


def find_embedding(
    a: Structure,
    b: Structure,
    *,
    fixed: Mapping[int, int] | None = None,
    domains: Mapping[int, Collection[int]] | None = None,
) -> Embedding | None:
    return next(iter_embeddings(a, b, fixed=fixed, domains=domains), None)


def count_embeddings(a: Structure, b: Structure) -> int:
    return sum(1 for _ in iter_embeddings(a, b))


def embeds(a: Structure, b: Structure) -> bool:
    return find_embedding(a, b) is not None


def enumerate_automorphisms(s: Structure) -> list[Embedding]:
    return enumerate_embeddings(s, s)


def aut_order(s: Structure) -> int:
    order = count_embeddings(s, s)
    log.debug("aut_order", size=s.size, order=order)
    return order


def embedding_images(a: Structure, b: Structure) -> list[frozenset[int]]:
    """Distinct images ``f(a)`` over all embeddings, sorted by their element lists."""
    seen = {e.image for e in iter_embeddings(a, b)}
    return sorted(seen, key=lambda img: (len(img), sorted(img)))
