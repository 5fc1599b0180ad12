"""
common/iterables_utils.py
=========================

Handy helpers for working with in-memory iterables.  The functions
remain dependency-free and type-annotated, so they can be re-used
across apps.

Exported symbols
────────────────
• subsets(items, max_size) → Iterator[tuple[T, ...]]
• colex_subsets(items, max_size) → list[tuple[T, ...]]
• partitions(items) → Iterator[list[list[T]]]

The generators are *lazy* so that very large search spaces do not
allocate memory up-front.
"""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence


# ──────────────────────────────────────────────
#  subsets
# ──────────────────────────────────────────────
def subsets[T](items: Sequence[T], max_size: int | None = None) -> Iterator[tuple[T, ...]]:
    """All subsets by increasing size, each in ``items`` order.

    >>> list(subsets([0, 1]))
    [(), (0,), (1,), (0, 1)]
    """
    top = len(items) if max_size is None else min(max_size, len(items))
    for r in range(top + 1):
        yield from itertools.combinations(items, r)


def colex_subsets(items: Sequence[int], max_size: int) -> list[tuple[int, ...]]:
    """Subsets of ``items`` of size ≤ ``max_size`` in colexicographic order.

    Every subset of ``S`` precedes ``S``.

    >>> colex_subsets([0, 1, 2], 2)
    [(), (0,), (1,), (0, 1), (2,), (0, 2), (1, 2)]
    """
    found = list(subsets(sorted(items), max_size))
    return sorted(found, key=lambda s: (tuple(reversed(s)), len(s)))


# ──────────────────────────────────────────────
#  partitions
# ──────────────────────────────────────────────
def partitions[T](items: Sequence[T]) -> Iterator[list[list[T]]]:
    """Set partitions of ``items``; blocks keep first-occurrence order.

    >>> sum(1 for _ in partitions([0, 1, 2]))
    5
    """
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for smaller in partitions(rest):
        yield [[head], *smaller]
        for i in range(len(smaller)):
            yield [*smaller[:i], [head, *smaller[i]], *smaller[i + 1 :]]
