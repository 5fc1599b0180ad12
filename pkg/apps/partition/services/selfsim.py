# apps/partition/services/selfsim.py
# ================================================================================
"""
Definable self-similarity.

An instance is ``f : A → B`` together with ``g : A → C`` landing in the
qf-class of ``pivot`` over ``base``.  A witness is ``D ∈ K`` with
``j : C → D`` and ``h : B → D`` such that ``h ∘ f = j ∘ g`` and ``h(B)`` lies in
the qf-class of ``j(pivot)`` over ``j(base)``.

* ``check_dss_instance`` – bounded search for a witness on the completion engine
* ``check_dss``          – sweep over all small instances
* ``dss_from_3amalg``    – witness read off a solved disjoint 3-amalgamation system
* ``super_dss_transfer`` – witness in ``K0 * K1`` laid together from reduct witnesses
"""

from __future__ import annotations

from functools import cache, partial
from itertools import combinations, permutations, product
from typing import TYPE_CHECKING

import structlog

from apps.amalgamation.datatype import PSystem, Unresolved
from apps.amalgamation.services.amalgams import embeddings_up_to_aut
from apps.amalgamation.services.builders import search_solver
from apps.amalgamation.services.systems import check_disjoint_n
from apps.classes.services.completion import PartialStructure, first_completion, placements_agree
from apps.classes.services.enumeration import enumerate_members, enumerate_members_upto, singleton_census
from apps.classes.services.membership import contains, known_hereditary
from apps.classes.specs import ClassKind, factor_reducts
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.exceptions import LimitExceededError, SignatureError
from apps.kernel.services.ages import QfClassSelector, qf_class
from apps.kernel.services.embeddings import iter_embeddings
from apps.kernel.structures import Embedding, Structure, Tup, embedding_defect, induced_substructure
from apps.partition.conf import DSS_MAX_SIZE, HYPOTHESIS_BASE
from apps.partition.datatype import DssInstance, DssWitness
from apps.partition.exceptions import HypothesisError
from apps.products.datatype import Superposition
from apps.products.services.assembly import superpose_structures
from common.iterables_utils import subsets
from infrastructure.worker import run_jobs

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from apps.amalgamation.services.builders import SystemSolver
    from apps.classes.specs import ClassSpec
    from infrastructure.worker import JobResult

log = structlog.get_logger(__name__).bind(component="SelfSimilarity")

type DssSolver = Callable[[ClassSpec, DssInstance], DssWitness | None]


# ─── Verification ───────────────────────────────────────────────────────────────


def verify_dss_witness(k: ClassSpec, inst: DssInstance, w: DssWitness) -> str | None:
    """Why ``w`` is not a witness for ``inst`` in ``k``, or ``None``."""
    if w.j.source != inst.c or w.h.source != inst.b or w.j.target != w.d or w.h.target != w.d:
        return "j and h must run from C and B into D"
    for name, src, e in (("j", inst.c, w.j), ("h", inst.b, w.h)):
        if (reason := embedding_defect(src, w.d, e.map)) is not None:
            return f"{name}: {reason}"
    for x in inst.a.universe:
        if w.h(inst.f(x)) != w.j(inst.g(x)):
            return f"h∘f and j∘g disagree at {x}"
    cls = qf_class(QfClassSelector(w.d, frozenset(w.j(x) for x in inst.base), w.j(inst.pivot)))
    if (off := next((y for y in inst.b.universe if w.h(y) not in cls), None)) is not None:
        return f"h({off}) = {w.h(off)} is outside the qf-class of j(pivot)"
    if not contains(k, w.d):
        return f"D is not a member of {k}"
    return None


# ─── One instance ───────────────────────────────────────────────────────────────


def _gluings(rest: list[int], targets: list[int]) -> Iterator[dict[int, int]]:
    for r in range(min(len(rest), len(targets)), -1, -1):
        for chosen in combinations(rest, r):
            for image in permutations(targets, r):
                yield dict(zip(chosen, image, strict=True))


def _placements(inst: DssInstance, disjoint: bool) -> list[tuple[int, tuple[int, ...]]]:
    """``(size, h)`` with ``C`` at ``0..|C|-1``: extra elements of ``B`` land in the class or on fresh points."""
    m = inst.c.size
    fixed = {inst.f(x): inst.g(x) for x in inst.a.universe}
    targets = [] if disjoint else sorted(inst.qf_class - inst.g.image)
    found = []
    for glue in _gluings(list(inst.extra), targets):
        fresh = m
        h = []
        for y in inst.b.universe:
            if y in fixed:
                h.append(fixed[y])
            elif y in glue:
                h.append(glue[y])
            else:
                h.append(fresh)
                fresh += 1
        found.append((fresh, tuple(h)))
    return sorted(found, key=lambda item: item[0])


def _class_pins(inst: DssInstance, h: Sequence[int]) -> dict[tuple[str, Tup], bool] | None:
    """Tuples putting every fresh image into the pivot's class; ``None`` if ``B`` contradicts one."""
    m, pivot = inst.c.size, inst.pivot
    domain = [*sorted(inst.base), pivot]
    back = {y: x for x, y in enumerate(h)}
    fresh = [y for y in h if y >= m]
    pins: dict[tuple[str, Tup], bool] = {}
    for name, arity in inst.c.sig.symbols:
        rel = inst.c.rel(name)
        for t in product(domain, repeat=arity):
            if pivot not in t:
                continue
            want = t in rel
            for y in fresh:
                moved = tuple(y if x == pivot else x for x in t)
                if all(x in back for x in moved) and inst.b.holds(name, tuple(back[x] for x in moved)) != want:
                    return None
                pins[name, moved] = want
    return pins


def check_dss_instance(
    k: ClassSpec, inst: DssInstance, host: int | None = None, *, disjoint: bool = False,
) -> DssWitness | None:
    """First witness with ``|D| ≤ host`` (default ``|B| + |C|``), else ``None``.

    ``C`` sits at ``0..|C|-1`` with ``j`` the inclusion.  With ``disjoint`` the
    extra elements of ``B`` are never identified with elements of ``C``.
    """
    if inst.a.sig != k.sig:
        msg = f"instance over [{inst.a.sig.describe()}] checked against {k} over [{k.sig.describe()}]"
        raise SignatureError(msg)
    host = host if host is not None else inst.b.size + inst.c.size
    padding = not known_hereditary(k)
    candidates = [(size, h) for size, h in _placements(inst, disjoint) if size <= host]
    if not candidates:
        return None

    tried = 0
    for total in range(candidates[0][0], host + 1):
        for size, h in candidates:
            if size > total or (size < total and not padding):
                continue
            placed = [(inst.c, tuple(inst.c.universe)), (inst.b, h)]
            if not placements_agree(k.sig, placed) or (pins := _class_pins(inst, h)) is None:
                continue
            tried += 1
            d = first_completion(k, PartialStructure.over(k.sig, total, placed, pinned=pins))
            if d is None:
                continue
            w = DssWitness(d, Embedding(inst.c, d, tuple(inst.c.universe)), Embedding(inst.b, d, h))
            if verify_dss_witness(k, inst, w) is None:
                log.debug("dss witness found", size=total, tried=tried)
                return w
        if not padding and total >= candidates[-1][0]:
            break
    log.debug("no dss witness", cls=str(k), host=host, tried=tried)
    return None


# ─── Sweep ──────────────────────────────────────────────────────────────────────


def dss_instances(k: ClassSpec, size: int, *, one_point: bool = True) -> list[DssInstance]:
    """Every instance with ``|A|, |B|, |C| ≤ size``; ``f`` up to automorphisms of ``B``.

    With ``one_point`` only ``|B| = |A| + 1`` is generated.
    """
    if size > DSS_MAX_SIZE:
        raise LimitExceededError("self-similarity instance size", size, DSS_MAX_SIZE)
    members = enumerate_members_upto(k, size)
    found = []
    for c in members:
        for base in subsets(list(c.universe), c.size - 1):
            for pivot in c.universe:
                if pivot in base:
                    continue
                cls = qf_class(QfClassSelector(c, frozenset(base), pivot))
                for a in members:
                    if a.size > len(cls):
                        continue
                    for g in iter_embeddings(a, c, domains={x: cls for x in a.universe}):
                        for b in members:
                            if b.size < a.size or (one_point and b.size != a.size + 1):
                                continue
                            for f in embeddings_up_to_aut(a, b):
                                found.append(DssInstance(a=a, b=b, c=c, f=f, base=frozenset(base), pivot=pivot, g=g))
    return found


def _dss_job(k: ClassSpec, host: int | None, inst: DssInstance) -> DssWitness | None:
    return check_dss_instance(k, inst, host)


def _certified(k: ClassSpec, inst: DssInstance, host: int | None) -> bool:
    bound = host if host is not None else inst.b.size + inst.c.size
    return known_hereditary(k) and bound >= inst.b.size + inst.c.size - inst.a.size


def check_dss(
    k: ClassSpec, size: int, host: int | None = None, *, one_point: bool = True, jobs: int | None = None,
) -> CheckReport:
    instances = dss_instances(k, size, one_point=one_point)
    results: list[JobResult[DssWitness | None]] = run_jobs(
        partial(_dss_job, k, host), instances, label="dss-instance", jobs=jobs,
    )
    failing: DssInstance | None = None
    undecided: DssInstance | None = None
    for inst, res in zip(instances, results, strict=True):
        if res.value is not None:
            continue
        if not res.timed_out and _certified(k, inst, host):
            failing = inst
            break
        undecided = undecided or inst

    stats = {"instances": len(instances), "timed_out": sum(r.timed_out for r in results)}
    if failing is not None:
        report = CheckReport(verdict=Verdict.FAIL, detail="definable self-similarity fails", witness=failing,
                             stats=stats)
    elif undecided is not None:
        report = CheckReport(verdict=Verdict.INCONCLUSIVE, detail="an instance has no witness within the bounds",
                             witness=undecided, stats=stats)
    else:
        report = CheckReport(verdict=Verdict.PASS, detail=f"witnesses for all {len(instances)} instances",
                             stats=stats)
    log.info("dss verdict", cls=str(k), size=size, host=host, verdict=str(report.verdict), **stats)
    return report


# ─── From disjoint 3-amalgamation ───────────────────────────────────────────────

_EMPTY: frozenset[int] = frozenset()
_P0, _P1, _P2 = frozenset({0}), frozenset({1}), frozenset({2})
_P01, _P02, _P12 = frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})


@cache
def _three_amalgamation(k: ClassSpec) -> CheckReport:
    return check_disjoint_n(k, 3, HYPOTHESIS_BASE)


def _require_hypotheses(k: ClassSpec) -> None:
    if (n := singleton_census(k)) != 1:
        msg = f"{k} has {n} one-element members up to isomorphism; exactly one is needed"
        raise HypothesisError(msg)
    if not known_hereditary(k):
        msg = f"{k} is not known to be hereditary"
        raise HypothesisError(msg)
    report = _three_amalgamation(k)
    if report.verdict is not Verdict.PASS:
        msg = f"{k} has no disjoint 3-amalgamation at base {HYPOTHESIS_BASE}: {report.detail}"
        raise HypothesisError(msg)


def self_similarity_system(k: ClassSpec, inst: DssInstance) -> PSystem:
    """Base system ``A_0 = A``, ``A_1`` the point, ``A_2 = C0``, ``A_01 = B``, ``A_02 = A_12 = C``."""
    (new,) = inst.extra
    point = enumerate_members(k, 1)[0]
    empty = Structure.empty(k.sig, 0)
    c0, c0_in_c = induced_substructure(inst.c, inst.base)
    structures = {_EMPTY: empty, _P0: inst.a, _P1: point, _P2: c0, _P01: inst.b, _P02: inst.c, _P12: inst.c}
    maps = {(_EMPTY, p): Embedding(empty, s, ()) for p, s in structures.items() if p}
    maps |= {
        (_P0, _P01): inst.f,
        (_P0, _P02): inst.g,
        (_P1, _P01): Embedding.checked(point, inst.b, (new,)),
        (_P1, _P12): Embedding.checked(point, inst.c, (inst.pivot,)),
        (_P2, _P02): c0_in_c,
        (_P2, _P12): c0_in_c,
    }
    return PSystem(n=3, structures=structures, maps=maps)


def _one_point_witness(k: ClassSpec, inst: DssInstance, solver: SystemSolver) -> DssWitness:
    sys = self_similarity_system(k, inst)
    solved = solver(k, sys)
    if solved is None:
        msg = f"the self-similarity system has no disjoint 3-amalgam in {k}"
        raise HypothesisError(msg)
    top = solved.top
    return DssWitness(solved.structures[top], solved.maps[_P02, top], solved.maps[_P01, top])


def _ordered(s: Structure, elems: Sequence[int]) -> Structure:
    """Restriction of ``s`` to ``elems``, element ``i`` being ``elems[i]``."""
    sub, _ = induced_substructure(s, elems)
    rank = {x: i for i, x in enumerate(elems)}
    return sub.relabel([rank[x] for x in sorted(elems)])


def dss_from_3amalg(
    k: ClassSpec, inst: DssInstance, solver: SystemSolver | None = None, *, check_hypotheses: bool = True,
) -> DssWitness:
    """Witness built from disjoint 3-amalgams, one extra element of ``B`` at a time."""
    if check_hypotheses:
        _require_hypotheses(k)
    solver = solver or search_solver()

    prefix = [inst.f(x) for x in inst.a.universe]
    c, base, pivot = inst.c, inst.base, inst.pivot
    j = Embedding.identity(inst.c)
    g = Embedding(_ordered(inst.b, prefix), c, inst.g.map)
    for y in inst.extra:
        a_step = g.source
        b_step = _ordered(inst.b, [*prefix, y])
        f_step = Embedding(a_step, b_step, tuple(range(len(prefix))))
        step = DssInstance(a=a_step, b=b_step, c=c, f=f_step, base=base, pivot=pivot, g=g)
        w = _one_point_witness(k, step, solver)
        j = j.compose(w.j)
        c, base, pivot, g = w.d, frozenset(w.j(x) for x in base), w.j(pivot), w.h
        prefix.append(y)

    rank = {y: i for i, y in enumerate(prefix)}
    witness = DssWitness(c, j, Embedding(inst.b, c, tuple(g(rank[y]) for y in inst.b.universe)))
    if (defect := verify_dss_witness(k, inst, witness)) is not None:
        msg = f"assembled witness rejected: {defect}"
        raise HypothesisError(msg)
    log.debug("dss witness from 3-amalgams", size=c.size, steps=len(inst.extra))
    return witness


# ─── Free superposition ─────────────────────────────────────────────────────────


def disjoint_search_solver(host: int | None = None) -> DssSolver:
    def solver(k: ClassSpec, inst: DssInstance) -> DssWitness | None:
        return check_dss_instance(k, inst, host, disjoint=True)

    return solver


def _trimmed(w: DssWitness) -> tuple[Structure, tuple[int, ...], tuple[int, ...]]:
    """``D`` cut down to ``h(B) ∪ j(C)`` with both maps into it."""
    used = sorted(w.j.image | w.h.image)
    sub, _ = induced_substructure(w.d, used)
    where = {x: i for i, x in enumerate(used)}
    return sub, tuple(where[x] for x in w.j.map), tuple(where[x] for x in w.h.map)


def super_dss_transfer(k: ClassSpec, inst: DssInstance, solver: DssSolver | None = None) -> DssWitness | Unresolved:
    """Witness in ``k0 * k1`` from a witness for each reduct instance."""
    if k.kind is not ClassKind.SUPER:
        msg = f"{k} is not a free superposition class"
        raise HypothesisError(msg)
    for factor in k.factors:
        if not known_hereditary(factor):
            msg = f"{factor} is not known to be hereditary"
            raise HypothesisError(msg)
    solver = solver or disjoint_search_solver()

    parts = []
    for side, factor in enumerate(k.factors):
        a, b, c = (factor_reducts(k, s)[side] for s in (inst.a, inst.b, inst.c))
        sub = DssInstance(
            a=a, b=b, c=c, f=Embedding(a, b, inst.f.map), base=inst.base, pivot=inst.pivot, g=Embedding(a, c, inst.g.map),
        )
        if (w := solver(factor, sub)) is None:
            return Unresolved(f"reduct instance {side} has no self-similarity witness in {factor}", sub)
        parts.append(_trimmed(w))

    (d0, j0, h0), (d1, j1, h1) = parts
    if d0.size != d1.size:
        return Unresolved(f"trimmed reduct witnesses differ in size: {d0.size} vs {d1.size}")
    aligner = [-1] * d0.size
    for m0, m1 in ((j0, j1), (h0, h1)):
        for x, y in zip(m0, m1, strict=True):
            if aligner[x] not in (-1, y):
                return Unresolved("reduct witnesses identify B and C differently")
            aligner[x] = y
    if sorted(aligner) != list(d1.universe):
        return Unresolved("reduct witnesses identify B and C differently")

    d = superpose_structures(Superposition(d0, d1, tuple(aligner))).structure
    w = DssWitness(d, Embedding(inst.c, d, j0), Embedding(inst.b, d, h0))
    if (defect := verify_dss_witness(k, inst, w)) is not None:
        return Unresolved(f"laid-over witness rejected: {defect}", inst)
    log.debug("super dss witness", size=d.size)
    return w
