# apps/amalgamation/services/amalgams.py
# ================================================================================
"""
Bounded joint-embedding and (strong) amalgamation checks.

``check_ap_instance`` places ``B0`` on the first ``|B0|`` elements of the
candidate amalgam and ``B1`` over it: the image of ``A`` is shared, the rest
of ``B1`` is either glued onto the rest of ``B0`` (a partial injective
matching) or laid on fresh elements.  Candidates are visited smallest
universe first; relation completions come from the completion engine, so the
first amalgam found is deterministic.

For a hereditary class an amalgam can always be cut down to the union of the
two images, so the search never pads and a miss at a bound of at least
``|B0| + |B1| - |A|`` is a certificate.  Other classes are padded up to the
host bound and a miss is only inconclusive.
"""

from __future__ import annotations

from functools import partial
from itertools import combinations, permutations
from typing import TYPE_CHECKING

import structlog

from apps.amalgamation.conf import SWEEP_LOG_EVERY
from apps.amalgamation.datatype import AmalgInstance, Amalgam
from apps.amalgamation.exceptions import AmalgamationError
from apps.classes.services.completion import PartialStructure, first_completion, placements_agree
from apps.classes.services.enumeration import check_hereditary, enumerate_members_upto
from apps.classes.services.membership import contains, known_hereditary
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.embeddings import enumerate_automorphisms, iter_embeddings
from apps.kernel.structures import Embedding, Structure, embedding_defect
from infrastructure.worker import JobResult, run_jobs

if TYPE_CHECKING:
    from collections.abc import Iterator

    from apps.classes.specs import ClassSpec

log = structlog.get_logger(__name__).bind(component="Amalgams")


# ─── Verification ───────────────────────────────────────────────────────────────


def verify_amalgam(
    inst: AmalgInstance, am: Amalgam, *, strong: bool = False, k: ClassSpec | None = None,
) -> str | None:
    """Why ``am`` is not an amalgam of ``inst`` (strong, in ``k`` when given), or ``None``."""
    for name, g, source in (("g0", am.g0, inst.b0), ("g1", am.g1, inst.b1)):
        if (reason := embedding_defect(source, am.c, g.map)) is not None:
            return f"{name}: {reason}"
    for x in inst.a.universe:
        if am.g0(inst.f0(x)) != am.g1(inst.f1(x)):
            return f"square does not commute at element {x} of A"
    if strong:
        shared = am.g0.image & am.g1.image
        expected = frozenset(am.g0(inst.f0(x)) for x in inst.a.universe)
        if shared != expected:
            extra = sorted(shared - expected)
            return f"images overlap outside A at {extra}"
    if k is not None and not contains(k, am.c):
        return f"amalgam is not in {k}"
    return None


# ─── One instance ───────────────────────────────────────────────────────────────


def _gluings(rest0: list[int], rest1: list[int], strong: bool) -> Iterator[dict[int, int]]:
    """Partial injective matchings ``rest1 → rest0``, most pairs first."""
    top = 0 if strong else min(len(rest0), len(rest1))
    for glued in range(top, -1, -1):
        for chosen in combinations(rest1, glued):
            for targets in permutations(rest0, glued):
                yield dict(zip(chosen, targets, strict=True))


def _placements(inst: AmalgInstance, strong: bool) -> list[tuple[int, tuple[int, ...]]]:
    """``(universe size, position of each B1 element)`` per gluing, in search order."""
    m0 = inst.b0.size
    shared = {inst.f1(x): inst.f0(x) for x in inst.a.universe}
    rest0 = [y for y in inst.b0.universe if y not in inst.f0.image]
    rest1 = [y for y in inst.b1.universe if y not in shared]
    found = []
    for glue in _gluings(rest0, rest1, strong):
        g1, fresh = [], m0
        for y in inst.b1.universe:
            if y in shared:
                g1.append(shared[y])
            elif y in glue:
                g1.append(glue[y])
            else:
                g1.append(fresh)
                fresh += 1
        found.append((fresh, tuple(g1)))
    return found


def check_ap_instance(k: ClassSpec, inst: AmalgInstance, host: int, *, strong: bool = False) -> Amalgam | None:
    """First amalgam of ``inst`` in ``k`` with at most ``host`` elements, else ``None``."""
    if inst.a.sig != k.sig:
        msg = f"instance over [{inst.a.sig.describe()}] checked against {k} over [{k.sig.describe()}]"
        raise SignatureError(msg)
    if host < max(inst.b0.size, inst.b1.size):
        msg = f"host bound {host} is below max(|B0|, |B1|) = {max(inst.b0.size, inst.b1.size)}"
        raise AmalgamationError(msg)

    padding = not known_hereditary(k)
    candidates = [(size, g1) for size, g1 in _placements(inst, strong) if size <= host]
    smallest = min((size for size, _ in candidates), default=host + 1)
    tried = 0
    for total in range(smallest, host + 1):
        for size, g1 in candidates:
            if size > total or (size < total and not padding):
                continue
            placed = [(inst.b0, tuple(inst.b0.universe)), (inst.b1, g1)]
            if not placements_agree(k.sig, placed):
                continue
            tried += 1
            c = first_completion(k, PartialStructure.over(k.sig, total, placed))
            if c is not None:
                log.debug("amalgam found", size=total, tried=tried, strong=strong)
                return Amalgam(c, Embedding(inst.b0, c, tuple(inst.b0.universe)), Embedding(inst.b1, c, g1))
        if not padding and total >= max(size for size, _ in candidates):
            break
    log.debug("no amalgam", cls=str(k), host=host, tried=tried, strong=strong)
    return None


# ─── Class-level sweeps ─────────────────────────────────────────────────────────


def embeddings_up_to_aut(a: Structure, b: Structure) -> list[Embedding]:
    """One embedding ``a → b`` per orbit of ``Aut(b)`` acting by post-composition."""
    autos = enumerate_automorphisms(b)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for e in iter_embeddings(a, b):
        key = min(tuple(s(y) for y in e.map) for s in autos)
        if key not in seen:
            seen.add(key)
            reps.append(e)
    return reps


def ap_instances(k: ClassSpec, base: int) -> list[AmalgInstance]:
    """Every instance over members of size ≤ ``base``, up to automorphisms of ``B0`` and ``B1``."""
    members = enumerate_members_upto(k, base)
    found = []
    for a in members:
        for i, b0 in enumerate(members):
            if b0.size < a.size or not (e0s := embeddings_up_to_aut(a, b0)):
                continue
            for b1 in members[i:]:
                for f0 in e0s:
                    for f1 in embeddings_up_to_aut(a, b1):
                        found.append(AmalgInstance(a=a, b0=b0, b1=b1, f0=f0, f1=f1))
    return found


def _certified(k: ClassSpec, inst: AmalgInstance, host: int) -> bool:
    return known_hereditary(k) and host >= inst.b0.size + inst.b1.size - inst.a.size


def _instance_job(k: ClassSpec, host: int, strong: bool, inst: AmalgInstance) -> Amalgam | None:
    return check_ap_instance(k, inst, host, strong=strong)


def _sweep(
    k: ClassSpec, instances: list[AmalgInstance], host: int, *, strong: bool, what: str, jobs: int | None,
) -> CheckReport:
    results: list[JobResult[Amalgam | None]] = run_jobs(
        partial(_instance_job, k, host, strong), instances, label=f"{what}-instance", jobs=jobs,
    )
    failing: AmalgInstance | None = None
    undecided: AmalgInstance | None = None
    timed_out = 0
    for i, (inst, res) in enumerate(zip(instances, results, strict=True)):
        if i and i % SWEEP_LOG_EVERY == 0:
            log.debug("sweep progress", what=what, done=i, total=len(instances))
        if res.timed_out:
            timed_out += 1
            undecided = undecided or inst
        elif res.value is None:
            if _certified(k, inst, host):
                failing = inst
                break
            undecided = undecided or inst

    stats = {"instances": len(instances), "timed_out": timed_out}
    if failing is not None:
        report = CheckReport(verdict=Verdict.FAIL, detail=f"{what} fails: no amalgam up to size {host}",
                             witness=failing, stats=stats)
    elif undecided is not None:
        report = CheckReport(verdict=Verdict.INCONCLUSIVE, detail=f"{what}: an instance has no amalgam within the bounds",
                             witness=undecided, stats=stats)
    else:
        report = CheckReport(verdict=Verdict.PASS, detail=f"{what} holds on {len(instances)} instances", stats=stats)
    log.info("sweep verdict", what=what, cls=str(k), verdict=str(report.verdict), **stats)
    return report


def check_ap(k: ClassSpec, base: int, host: int, *, strong: bool = False, jobs: int | None = None) -> CheckReport:
    """(Strong) amalgamation over every instance with members of size ≤ ``base``."""
    return _sweep(k, ap_instances(k, base), host, strong=strong, what="SAP" if strong else "AP", jobs=jobs)


def check_jep(k: ClassSpec, base: int, host: int, *, jobs: int | None = None) -> CheckReport:
    """Joint embedding for every pair of non-empty members of size ≤ ``base``."""
    members = [m for m in enumerate_members_upto(k, base) if m.size > 0]
    empty = Structure.empty(k.sig, 0)
    pairs = [AmalgInstance.joint(empty, b0, b1) for i, b0 in enumerate(members) for b1 in members[i:]]
    return _sweep(k, pairs, host, strong=False, what="JEP", jobs=jobs)


def check_hp(k: ClassSpec, size: int) -> CheckReport:
    return check_hereditary(k, size)
