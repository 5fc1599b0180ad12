# apps/amalgamation/services/systems.py
# ================================================================================
"""
Disjoint amalgamation systems.

A base system over ``n`` has one structure per proper subset of ``0..n-1``.
Up to isomorphism it is the same thing as its colimit: a universe in which
every element remembers the minimal index set it was born at, plus a
structure on each maximal piece.  ``base_systems`` enumerates systems in that
form (fewest elements first); ``solve_disjoint_n`` completes one system on its
colimit universe.
"""

from __future__ import annotations

from functools import partial
from itertools import combinations, product
from typing import TYPE_CHECKING

import structlog

from apps.amalgamation.conf import MAX_SYSTEM_ARITY, ORIGIN_MARK_PREFIX
from apps.amalgamation.datatype import Colimit, Index, PSystem, PSystemViolation, index_key, subsets_of
from apps.amalgamation.exceptions import AmalgamationError
from apps.classes.services.completion import PartialStructure, completions, first_completion
from apps.classes.services.membership import contains, known_hereditary
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.services.canonical import canonical_form
from apps.kernel.structures import Embedding, Signature, Structure, Tup, embedding_defect, induced_substructure
from infrastructure.worker import run_jobs

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

    from apps.classes.specs import ClassSpec
    from apps.kernel.services.canonical import CanonicalForm

log = structlog.get_logger(__name__).bind(component="Systems")


# ─── Axioms ─────────────────────────────────────────────────────────────────────


def verify_p_system(sys: PSystem) -> PSystemViolation | None:
    """First violated axiom, checked in a fixed order, or ``None``."""
    sets = sys.index_sets
    if not sets:
        return PSystemViolation("family", "no index sets")
    sig = sys.structures[sets[0]].sig
    for p in sets:
        if not p <= sys.top:
            return PSystemViolation("family", f"{sorted(p)} is not a subset of 0..{sys.n - 1}", p)
        if sys.structures[p].sig != sig:
            return PSystemViolation("family", f"A_{sorted(p)} has a different signature", p)
    for p, q in combinations(sets, 2):
        if p & q not in sys.structures:
            return PSystemViolation("closure", f"{sorted(p)} ∩ {sorted(q)} is not an index set", (p, q))

    for p in sets:
        for q in sets:
            if not p <= q:
                continue
            e = sys.map(p, q)
            if e is None:
                return PSystemViolation("maps", f"no map from A_{sorted(p)} to A_{sorted(q)}", (p, q))
            if (reason := embedding_defect(sys.structures[p], sys.structures[q], e.map)) is not None:
                return PSystemViolation("maps", f"f_{sorted(p)},{sorted(q)}: {reason}", (p, q))

    for p in sets:
        e = sys.map(p, p)
        assert e is not None
        if (moved := next((x for x, y in enumerate(e.map) if x != y), None)) is not None:
            return PSystemViolation("identity", f"f_{sorted(p)},{sorted(p)} moves {moved}", (p, moved))

    for p, q, r in product(sets, repeat=3):
        if p <= q <= r:
            direct, via = sys.map(p, r), sys.map(q, r)
            inner = sys.map(p, q)
            assert direct is not None and via is not None and inner is not None
            for x in sys.structures[p].universe:
                if direct(x) != via(inner(x)):
                    return PSystemViolation(
                        "commutativity", f"f_{sorted(p)},{sorted(r)} ≠ f_{sorted(q)},{sorted(r)} ∘ f_{sorted(p)},{sorted(q)}",
                        (p, q, r, x),
                    )

    for r in sets:
        below = [p for p in sets if p <= r]
        for p, q in combinations(below, 2):
            fp, fq, fpq = sys.map(p, r), sys.map(q, r), sys.map(p & q, r)
            assert fp is not None and fq is not None and fpq is not None
            extra = sorted((fp.image & fq.image) - fpq.image)
            if extra:
                return PSystemViolation(
                    "disjointness", f"images of A_{sorted(p)} and A_{sorted(q)} meet outside A_{sorted(p & q)} in A_{sorted(r)}",
                    (p, q, r, extra[0]),
                )
    return None


# ─── Colimits ───────────────────────────────────────────────────────────────────


def colimit_base(sys: PSystem) -> Colimit:
    """Glue the structures along the maps.

    Elements are numbered by their minimal origin (index set order) and then
    by their position in the origin structure.
    """
    if (violation := verify_p_system(sys)) is not None:
        msg = f"system violates {violation.axiom}: {violation.detail}"
        raise AmalgamationError(msg)
    sets = sys.index_sets
    ids: dict[Index, list[int]] = {}
    origin: list[Index] = []
    for p in sets:
        pos = [-1] * sys.structures[p].size
        for q in sets:
            if q < p:
                f = sys.map(q, p)
                assert f is not None
                for y, x in enumerate(f.map):
                    if pos[x] == -1:
                        pos[x] = ids[q][y]
        for x, at in enumerate(pos):
            if at == -1:
                pos[x] = len(origin)
                origin.append(p)
        ids[p] = pos

    sig = sys.structures[sets[0]].sig
    rels: list[set[Tup]] = [set() for _ in sig.symbols]
    for p in sets:
        for k, rel in enumerate(sys.structures[p].relations):
            rels[k].update(tuple(ids[p][x] for x in t) for t in rel)
    glued = Structure(sig, len(origin), tuple(frozenset(r) for r in rels))
    inclusions = {p: Embedding(sys.structures[p], glued, tuple(ids[p])) for p in sets}
    return Colimit(glued, inclusions, tuple(origin))


def colimit_size_by_inclusion_exclusion(sys: PSystem) -> int:
    """``|⋃ images|`` from the sizes of intersections of the maximal structures alone."""
    maximal = sys.maximal
    total = 0
    for r in range(1, len(maximal) + 1):
        for chosen in combinations(maximal, r):
            meet = frozenset.intersection(*chosen)
            total += (-1) ** (r + 1) * sys.structures[meet].size
    return total


def system_from_colimit(n: int, glued: Structure, origin: tuple[Index, ...]) -> PSystem:
    """The base system whose colimit is ``glued`` with the given origins."""
    pieces: dict[Index, list[int]] = {}
    structures: dict[Index, Structure] = {}
    for p in subsets_of(range(n))[:-1]:
        pieces[p] = [x for x in glued.universe if origin[x] <= p]
        structures[p] = induced_substructure(glued, pieces[p])[0]
    maps = {}
    for p, q in combinations(pieces, 2):
        if p < q:
            where = {x: i for i, x in enumerate(pieces[q])}
            maps[p, q] = Embedding(structures[p], structures[q], tuple(where[x] for x in pieces[p]))
    return PSystem(n=n, structures=structures, maps=maps)


def vertex_system(n: int, given: Mapping[Index, Structure]) -> PSystem:
    """Base system whose ``A_p`` lives on the vertices ``p`` (in increasing order).

    Structures not in ``given`` are induced from the first given structure
    whose index set contains them.
    """
    if not given:
        msg = "a vertex system needs at least one structure"
        raise AmalgamationError(msg)
    sig = next(iter(given.values())).sig
    rels: list[set[Tup]] = [set() for _ in sig.symbols]
    for p, s in given.items():
        if s.size != len(p):
            msg = f"A_{sorted(p)} has {s.size} elements, expected {len(p)}"
            raise AmalgamationError(msg)
        verts = sorted(p)
        for k, rel in enumerate(s.relations):
            rels[k].update(tuple(verts[x] for x in t) for t in rel)
    glued = Structure(sig, n, tuple(frozenset(r) for r in rels))
    sys = system_from_colimit(n, glued, tuple(frozenset({v}) for v in range(n)))
    for p, s in given.items():
        if sys.structures[p] != s:
            msg = f"given structures disagree on the vertices of {sorted(p)}"
            raise AmalgamationError(msg)
    return sys


# ─── Enumeration of base systems ────────────────────────────────────────────────


def _allocations(n: int, base: int) -> list[dict[Index, int]]:
    """Element counts per birth set, keeping every maximal piece within ``base``."""
    proper = subsets_of(range(n))[:-1]
    maximal = [m for m in proper if len(m) == n - 1]
    found: list[dict[Index, int]] = []

    def rec(i: int, load: dict[Index, int], counts: dict[Index, int]) -> None:
        if i == len(proper):
            found.append(dict(counts))
            return
        p = proper[i]
        above = [m for m in maximal if p <= m]
        room = min(base - load[m] for m in above)
        for c in range(room + 1):
            for m in above:
                load[m] += c
            counts[p] = c
            rec(i + 1, load, counts)
            for m in above:
                load[m] -= c

    rec(0, dict.fromkeys(maximal, 0), {})
    return sorted(found, key=lambda c: (sum(c.values()), [c[p] for p in proper]))


def _marked(glued: Structure, origin: tuple[Index, ...], n: int) -> Structure:
    marks = Signature.of(*((f"{ORIGIN_MARK_PREFIX}{i}", 1) for i in range(n)))
    return glued.expand(marks, {f"{ORIGIN_MARK_PREFIX}{i}": [(x,) for x in glued.universe if i not in origin[x]]
                                for i in range(n)})


def _colimit_structures(k: ClassSpec, origin: tuple[Index, ...], n: int) -> Iterator[Structure]:
    size = len(origin)
    maximal = [frozenset(range(n)) - {i} for i in reversed(range(n))]
    pieces = [[x for x in range(size) if origin[x] <= m] for m in maximal]

    def rec(i: int, truth: list[set[Tup]]) -> Iterator[Structure]:
        if i == len(pieces):
            yield Structure(k.sig, size, tuple(frozenset(r) for r in truth))
            return
        local = pieces[i]
        where = {x: j for j, x in enumerate(local)}
        so_far = Structure(k.sig, size, tuple(frozenset(r) for r in truth))
        placed = []
        for earlier in pieces[:i]:
            shared = sorted(set(local) & set(earlier))
            if shared:
                placed.append((induced_substructure(so_far, shared)[0], tuple(where[x] for x in shared)))
        for s in completions(k, PartialStructure.over(k.sig, len(local), placed)):
            merged = [set(r) for r in truth]
            for kk, rel in enumerate(s.relations):
                merged[kk].update(tuple(local[x] for x in t) for t in rel)
            yield from rec(i + 1, merged)

    yield from rec(0, [set() for _ in k.sig.symbols])


def base_systems(k: ClassSpec, n: int, base: int) -> list[PSystem]:
    """Every base system in ``k`` with pieces of at most ``base`` elements, up to isomorphism."""
    if not 2 <= n <= MAX_SYSTEM_ARITY:
        msg = f"system arity must lie in 2..{MAX_SYSTEM_ARITY}, got {n}"
        raise AmalgamationError(msg)
    hereditary = known_hereditary(k)
    found = []
    for counts in _allocations(n, base):
        origin = tuple(p for p in sorted(counts, key=index_key) for _ in range(counts[p]))
        seen: set[CanonicalForm] = set()
        for glued in _colimit_structures(k, origin, n):
            cf = canonical_form(_marked(glued, origin, n))
            if cf in seen:
                continue
            seen.add(cf)
            sys = system_from_colimit(n, glued, origin)
            if hereditary or all(contains(k, s) for s in sys.structures.values()):
                found.append(sys)
    log.debug("base systems", cls=str(k), n=n, base=base, count=len(found))
    return found


# ─── Solving ────────────────────────────────────────────────────────────────────


def solve_disjoint_n(k: ClassSpec, sys: PSystem, pad: int = 0) -> PSystem | None:
    """Extend a base system by ``A_n`` on its colimit universe (plus up to ``pad`` points), else ``None``.

    Padding is only used for classes not known to be hereditary.
    """
    if not sys.is_base():
        msg = "only base systems (all proper subsets, no top) can be solved"
        raise AmalgamationError(msg)
    col = colimit_base(sys)
    placed = [(sys.structures[m], col.inclusions[m].map) for m in sys.maximal]
    extra = 0 if known_hereditary(k) else pad
    for more in range(extra + 1):
        top = first_completion(k, PartialStructure.over(k.sig, col.structure.size + more, placed))
        if top is not None:
            return sys.extended(top, {p: col.inclusions[p].map for p in sys.index_sets})
    return None


def _solve_job(k: ClassSpec, pad: int, sys: PSystem) -> PSystem | None:
    return solve_disjoint_n(k, sys, pad)


def check_disjoint_n(k: ClassSpec, n: int, base: int, pad: int = 0, *, jobs: int | None = None) -> CheckReport:
    """Disjoint ``n``-amalgamation over every base system with pieces of at most ``base`` elements."""
    systems = base_systems(k, n, base)
    results = run_jobs(partial(_solve_job, k, pad), systems, label="namalg-system", jobs=jobs)
    certified = known_hereditary(k)
    undecided: PSystem | None = None
    timed_out = 0
    for sys, res in zip(systems, results, strict=True):
        if res.timed_out:
            timed_out += 1
            undecided = undecided or sys
        elif res.value is None:
            if certified:
                log.info("namalg counter-system", cls=str(k), n=n, size=colimit_base(sys).structure.size)
                return CheckReport(verdict=Verdict.FAIL, detail=f"a base system has no disjoint {n}-amalgam",
                                   witness=sys, stats={"systems": len(systems)})
            undecided = undecided or sys

    stats = {"systems": len(systems), "timed_out": timed_out}
    if undecided is not None:
        return CheckReport(verdict=Verdict.INCONCLUSIVE, detail=f"a base system is not completed within pad {pad}",
                           witness=undecided, stats=stats)
    log.info("namalg verdict", cls=str(k), n=n, base=base, verdict="pass", **stats)
    return CheckReport(verdict=Verdict.PASS, detail=f"disjoint {n}-amalgamation holds on {len(systems)} systems",
                       stats=stats)
