# apps/partition/services/coloring.py
# ================================================================================
"""
Bad colorings and indivisibility witnesses.

``b`` witnesses ``(a, k)`` when every ``k``-coloring of ``b`` leaves some copy
of ``a`` monochromatic.  Copies are compared by their vertex sets only, so the
search runs over the hypergraph of distinct embedding images.
"""

from __future__ import annotations

from functools import partial
from itertools import product
from typing import TYPE_CHECKING

import structlog

from apps.classes.services.enumeration import enumerate_members
from apps.classes.services.membership import contains
from apps.kernel.conf import check_deadline, current_limits
from apps.kernel.exceptions import LimitExceededError, TimeLimitExceededError
from apps.kernel.services.embeddings import embedding_images
from apps.kernel.structures import Structure, ensure_same_signature
from apps.partition.conf import EXHAUSTIVE_MAX_COLORINGS
from apps.partition.datatype import Coloring
from apps.partition.exceptions import ColoringError, WitnessError
from infrastructure.worker import run_jobs

if TYPE_CHECKING:
    from apps.classes.specs import ClassSpec
    from infrastructure.worker import JobResult

log = structlog.get_logger(__name__).bind(component="Coloring")


def _hyperedges(a: Structure, b: Structure, k: int) -> list[tuple[int, ...]] | None:
    """Sorted images of ``a`` in ``b``; ``None`` when some copy is monochromatic under every coloring."""
    ensure_same_signature(a, b)
    if k < 2:
        msg = f"at least two colors are needed, got {k}"
        raise ColoringError(msg)
    edges = [tuple(sorted(img)) for img in embedding_images(a, b)]
    if any(len(e) <= 1 for e in edges):
        return None
    return edges


# ─── Backtracking ───────────────────────────────────────────────────────────────


def find_bad_coloring(a: Structure, b: Structure, k: int) -> Coloring | None:
    """A ``k``-coloring of ``b`` with no monochromatic copy of ``a``, else ``None``.

    Vertices are colored by decreasing hyperedge degree.  A vertex never opens
    a color beyond the next unused one, and a color is ruled out for a vertex
    whenever every other vertex of one of its hyperedges already carries it.
    """
    edges = _hyperedges(a, b, k)
    if edges is None:
        return None
    n = b.size
    if not edges:
        return Coloring(b, k, (0,) * n)

    incident: list[list[int]] = [[] for _ in range(n)]
    for i, e in enumerate(edges):
        for v in e:
            incident[v].append(i)
    order = sorted(range(n), key=lambda v: (-len(incident[v]), v))
    color = [-1] * n
    nodes = 0

    def forbidden(v: int) -> set[int]:
        out = set()
        for i in incident[v]:
            others = {color[u] for u in edges[i] if u != v}
            if len(others) == 1 and -1 not in others:
                out |= others
        return out

    def dead_end(v: int) -> bool:
        for i in incident[v]:
            open_ = [u for u in edges[i] if color[u] < 0]
            if len(open_) == 1 and len(forbidden(open_[0])) == k:
                return True
        return False

    def rec(pos: int, used: int) -> bool:
        nonlocal nodes
        check_deadline()
        if pos == n:
            return True
        v = order[pos]
        ruled_out = forbidden(v)
        for c in range(min(k, used + 1)):
            if c in ruled_out:
                continue
            nodes += 1
            color[v] = c
            if not dead_end(v) and rec(pos + 1, max(used, c + 1)):
                return True
        color[v] = -1
        return False

    found = rec(0, 0)
    log.debug("coloring search", hyperedges=len(edges), colors=k, nodes=nodes, found=found)
    return Coloring(b, k, tuple(color)) if found else None


def exhaustive_bad_coloring(a: Structure, b: Structure, k: int) -> Coloring | None:
    """Reference oracle: first bad coloring in lexicographic order over all ``k^|b|``."""
    edges = _hyperedges(a, b, k)
    if edges is None:
        return None
    if k**b.size > EXHAUSTIVE_MAX_COLORINGS:
        raise LimitExceededError("colorings to enumerate", k**b.size, EXHAUSTIVE_MAX_COLORINGS)
    for assignment in product(range(k), repeat=b.size):
        check_deadline()
        if all(len({assignment[v] for v in e}) > 1 for e in edges):
            return Coloring(b, k, assignment)
    return None


# ─── Witnesses ──────────────────────────────────────────────────────────────────


def _require_member(k: ClassSpec, s: Structure, role: str) -> None:
    if not contains(k, s):
        msg = f"{role} of size {s.size} is not a member of {k}"
        raise WitnessError(msg)


def verify_indivisibility_witness(k: ClassSpec, a: Structure, colors: int, b: Structure) -> bool:
    _require_member(k, a, "pattern")
    _require_member(k, b, "candidate witness")
    return find_bad_coloring(a, b, colors) is None


def _witness_job(a: Structure, colors: int, b: Structure) -> bool:
    return find_bad_coloring(a, b, colors) is None


def find_indivisibility_witness(
    k: ClassSpec, a: Structure, colors: int, max_size: int, *, jobs: int | None = None,
) -> Structure | None:
    """Smallest member (first in enumeration order) witnessing ``(a, colors)``, up to ``max_size``."""
    _require_member(k, a, "pattern")
    for n in range(a.size, max_size + 1):
        members = enumerate_members(k, n)
        results: list[JobResult[bool]] = run_jobs(
            partial(_witness_job, a, colors), members, label="witness-candidate", jobs=jobs,
        )
        for b, res in zip(members, results, strict=True):
            if res.timed_out:
                raise TimeLimitExceededError(current_limits().TIME_LIMIT_S or 0.0)
            if res.value:
                log.info("indivisibility witness found", cls=str(k), pattern=a.size, colors=colors, size=n)
                return b
    log.info("no indivisibility witness", cls=str(k), pattern=a.size, colors=colors, max_size=max_size)
    return None
