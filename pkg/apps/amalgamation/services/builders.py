# apps/amalgamation/services/builders.py
# ================================================================================
"""
Constructive amalgams for product classes.

* ``lex_amalgam_builder``        – amalgamate the bases, then each fiber of the
  base amalgam: copied, joined, amalgamated over ``A`` or filled with any member
* ``lex_strong_amalgam_builder`` – the same with strong oracles; fibers are
  never joined because the base images only meet over ``A``
* ``full_amalgam_builder``       – amalgamate the two quotients separately and
  take the full product of the results
* ``super_n_amalgam_builder``    – complete both reduct systems, cut them down
  to the union of the images and lay one completion over the other

Sub-problems go to *oracles*; by default these are the bounded searches of
``apps.amalgamation.services.amalgams`` and ``systems``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.amalgamation.datatype import AmalgInstance, Amalgam, PSystem, Unresolved, index_key
from apps.amalgamation.exceptions import AmalgamationError
from apps.amalgamation.services.amalgams import check_ap_instance, verify_amalgam
from apps.amalgamation.services.systems import solve_disjoint_n, verify_p_system
from apps.classes.services.enumeration import enumerate_members
from apps.classes.services.membership import contains, enumeration_limit, known_hereditary
from apps.classes.specs import ClassKind, factor_reducts
from apps.kernel.conf import current_limits
from apps.kernel.structures import Embedding, Structure, induced_substructure
from apps.products.datatype import FullDecomposition, LexAssembly, Superposition
from apps.products.services.assembly import full_product, lex_structure, superpose_structures
from apps.products.services.decompose import decompose_full, decompose_lex

if TYPE_CHECKING:
    from collections.abc import Callable

    from apps.amalgamation.datatype import Index
    from apps.classes.specs import ClassSpec

log = structlog.get_logger(__name__).bind(component="AmalgamBuilders")

type AmalgamOracle = Callable[[ClassSpec, AmalgInstance, bool], Amalgam | None]
type SystemSolver = Callable[[ClassSpec, PSystem], PSystem | None]


# ─── Default oracles ────────────────────────────────────────────────────────────


def search_oracle(host: int | None = None) -> AmalgamOracle:
    """``check_ap_instance`` bounded by ``host``, or by the pushout size plus the configured padding."""

    def oracle(k: ClassSpec, inst: AmalgInstance, strong: bool) -> Amalgam | None:
        bound = host
        if bound is None:
            pushout = inst.b0.size + inst.b1.size - inst.a.size
            bound = max(pushout, inst.b0.size, inst.b1.size) + current_limits().DEFAULT_HOST_PADDING
        return check_ap_instance(k, inst, bound, strong=strong)

    return oracle


def search_solver(pad: int = 0) -> SystemSolver:
    def solver(k: ClassSpec, sys: PSystem) -> PSystem | None:
        return solve_disjoint_n(k, sys, pad)

    return solver


def _any_member(k: ClassSpec) -> Structure | None:
    for n in range(1, enumeration_limit(k) + 1):
        if members := enumerate_members(k, n):
            return members[0]
    return None


# ─── Lexicographic ──────────────────────────────────────────────────────────────


def _lex_parts(s: Structure, k: ClassSpec) -> LexAssembly:
    result = decompose_lex(s, *k.factors)
    if not isinstance(result, LexAssembly):
        msg = f"structure is not in {k}: {result.reason}"
        raise AmalgamationError(msg)
    return result


def _factor_lex(f: Embedding, src: LexAssembly, dst: LexAssembly) -> tuple[Embedding, dict[int, Embedding]]:
    """Base map ``g`` and fiber maps ``h_b`` with ``f(a, b) = (h_b(a), g(b))``."""
    base: dict[int, int] = {}
    fiber: dict[int, list[int]] = {b: [0] * fb.size for b, fb in enumerate(src.fibers)}
    for x, (a, b) in enumerate(src.coordinates):
        a2, b2 = dst.coordinates[f(x)]
        base[b] = b2
        fiber[b][a] = a2
    g = Embedding.checked(src.base, dst.base, [base[b] for b in src.base.universe])
    return g, {b: Embedding.checked(src.fibers[b], dst.fibers[g(b)], m) for b, m in fiber.items()}


def _lex_build(k: ClassSpec, inst: AmalgInstance, oracle: AmalgamOracle, strong: bool) -> Amalgam | Unresolved:
    if k.kind is not ClassKind.LEX:
        msg = f"{k} is not a lexicographic product class"
        raise AmalgamationError(msg)
    k0, k1 = k.factors
    pa, p0, p1 = (_lex_parts(s, k) for s in (inst.a, inst.b0, inst.b1))
    base_f0, fib_f0 = _factor_lex(inst.f0, pa, p0)
    base_f1, fib_f1 = _factor_lex(inst.f1, pa, p1)

    base_inst = AmalgInstance(a=pa.base, b0=p0.base, b1=p1.base, f0=base_f0, f1=base_f1)
    base_am = oracle(k1, base_inst, strong)
    if base_am is None:
        return Unresolved(f"no base amalgam in {k1}", base_inst)

    over0 = {base_am.g0(b): b for b in p0.base.universe}
    over1 = {base_am.g1(b): b for b in p1.base.universe}
    over_a = {base_am.g0(base_f0(a)): a for a in pa.base.universe}
    fibers: list[Structure] = []
    into: dict[tuple[int, int], Embedding] = {}
    for c in base_am.c.universe:
        if c in over_a:
            a = over_a[c]
            b0, b1 = base_f0(a), base_f1(a)
            sub = AmalgInstance(a=pa.fibers[a], b0=p0.fibers[b0], b1=p1.fibers[b1], f0=fib_f0[a], f1=fib_f1[a])
            if (am := oracle(k0, sub, strong)) is None:
                return Unresolved(f"no fiber amalgam in {k0} over base element {c}", sub)
            fibers.append(am.c)
            into[0, b0], into[1, b1] = am.g0, am.g1
        elif c in over0 and c in over1:
            b0, b1 = over0[c], over1[c]
            sub = AmalgInstance.joint(Structure.empty(k0.sig, 0), p0.fibers[b0], p1.fibers[b1])
            if (am := oracle(k0, sub, False)) is None:
                return Unresolved(f"no joint embedding in {k0} over base element {c}", sub)
            fibers.append(am.c)
            into[0, b0], into[1, b1] = am.g0, am.g1
        elif c in over0 or c in over1:
            t, b = (0, over0[c]) if c in over0 else (1, over1[c])
            fiber = (p0, p1)[t].fibers[b]
            fibers.append(fiber)
            into[t, b] = Embedding.identity(fiber)
        else:
            if (filler := _any_member(k0)) is None:
                return Unresolved(f"{k0} has no non-empty member to fill base element {c}")
            fibers.append(filler)

    built = lex_structure(LexAssembly(base=base_am.c, fibers=tuple(fibers), fiber_sig=k0.sig))
    maps = []
    for t, (part, g) in enumerate(((p0, base_am.g0), (p1, base_am.g1))):
        maps.append(tuple(built.index((into[t, b](a), g(b))) for a, b in part.coordinates))
    am = Amalgam(built.structure, Embedding(inst.b0, built.structure, maps[0]),
                 Embedding(inst.b1, built.structure, maps[1]))
    if (defect := verify_amalgam(inst, am, strong=strong, k=k)) is not None:
        return Unresolved(f"assembled amalgam rejected: {defect}", inst)
    log.debug("lex amalgam built", size=am.c.size, base=base_am.c.size, strong=strong)
    return am


def lex_amalgam_builder(k: ClassSpec, inst: AmalgInstance, oracle: AmalgamOracle | None = None) -> Amalgam | Unresolved:
    return _lex_build(k, inst, oracle or search_oracle(), strong=False)


def lex_strong_amalgam_builder(
    k: ClassSpec, inst: AmalgInstance, oracle: AmalgamOracle | None = None,
) -> Amalgam | Unresolved:
    return _lex_build(k, inst, oracle or search_oracle(), strong=True)


# ─── Full ───────────────────────────────────────────────────────────────────────


def _full_parts(s: Structure, k: ClassSpec) -> FullDecomposition:
    result = decompose_full(s, *k.factors, bound=current_limits().WITNESS_MAX_SIZE)
    if not isinstance(result, FullDecomposition):
        msg = f"structure is not in {k}: {result.reason}"
        raise AmalgamationError(msg)
    return result


def _factor_full(f: Embedding, src: FullDecomposition, dst: FullDecomposition) -> tuple[Embedding, Embedding]:
    left: dict[int, int] = {}
    right: dict[int, int] = {}
    for x, (i, j) in enumerate(src.coordinates):
        i2, j2 = dst.coordinates[f(x)]
        left[i], right[j] = i2, j2
    return (
        Embedding.checked(src.q0, dst.q0, [left[i] for i in src.q0.universe]),
        Embedding.checked(src.q1, dst.q1, [right[j] for j in src.q1.universe]),
    )


def full_amalgam_builder(k: ClassSpec, inst: AmalgInstance, oracle: AmalgamOracle | None = None) -> Amalgam | Unresolved:
    """Amalgamate the ``E0`` and ``E1`` quotients independently; the result is a plain (not strong) amalgam."""
    if k.kind is not ClassKind.FULL:
        msg = f"{k} is not a full product class"
        raise AmalgamationError(msg)
    oracle = oracle or search_oracle()
    da, d0, d1 = (_full_parts(s, k) for s in (inst.a, inst.b0, inst.b1))
    for d in (da, d0, d1):
        if d.host0.target != d.q0 or d.host1.target != d.q1:
            return Unresolved("a quotient is not itself a member; minimal hosts are needed", d)
    fa0, fa1 = _factor_full(inst.f0, da, d0)
    fb0, fb1 = _factor_full(inst.f1, da, d1)

    factor_amalgams = []
    for side, factor, f0, f1 in ((0, k.factors[0], fa0, fb0), (1, k.factors[1], fa1, fb1)):
        sub = AmalgInstance(a=f0.source, b0=f0.target, b1=f1.target, f0=f0, f1=f1)
        if (am := oracle(factor, sub, False)) is None:
            return Unresolved(f"no amalgam of quotient {side} in {factor}", sub)
        factor_amalgams.append(am)

    am0, am1 = factor_amalgams
    built = full_product(am0.c, am1.c)
    maps = []
    for d, t in ((d0, 0), (d1, 1)):
        g0, g1 = (am0.g0, am1.g0) if t == 0 else (am0.g1, am1.g1)
        maps.append(tuple(built.index((g0(i), g1(j))) for i, j in d.coordinates))
    am = Amalgam(built.structure, Embedding(inst.b0, built.structure, maps[0]),
                 Embedding(inst.b1, built.structure, maps[1]))
    if (defect := verify_amalgam(inst, am, k=k)) is not None:
        return Unresolved(f"assembled amalgam rejected: {defect}", inst)
    log.debug("full amalgam built", size=am.c.size)
    return am


# ─── Free superposition ─────────────────────────────────────────────────────────


def _trimmed_top(solved: PSystem) -> tuple[Structure, dict[Index, tuple[int, ...]]]:
    """``A_n`` cut down to the union of the images, with the maps into it."""
    top = solved.top
    sets = [p for p in solved.index_sets if p != top]
    into = {p: solved.maps[p, top].map for p in sets}
    used = sorted(set().union(*into.values()))
    sub, _ = induced_substructure(solved.structures[top], used)
    where = {x: i for i, x in enumerate(used)}
    return sub, {p: tuple(where[x] for x in m) for p, m in into.items()}


def _aligner(into0: dict[Index, tuple[int, ...]], into1: dict[Index, tuple[int, ...]], size: int) -> tuple[int, ...]:
    """``g`` with ``g ∘ f_{X,n,0} = f_{X,n,1}``, read off at each element's minimal origin."""
    g = [-1] * size
    for p in sorted(into0, key=index_key):
        for b, a in enumerate(into0[p]):
            if g[a] == -1:
                g[a] = into1[p][b]
    return tuple(g)


def super_n_amalgam_builder(k: ClassSpec, sys: PSystem, solver: SystemSolver | None = None) -> PSystem | Unresolved:
    """Complete a base system in ``k0 * k1`` from completions of its two reduct systems."""
    if k.kind is not ClassKind.SUPER:
        msg = f"{k} is not a free superposition class"
        raise AmalgamationError(msg)
    for factor in k.factors:
        if not known_hereditary(factor):
            msg = f"{factor} is not known to be hereditary; the transfer needs hereditary factors"
            raise AmalgamationError(msg)
    if not sys.is_base() or verify_p_system(sys) is not None:
        msg = "input is not a valid base system"
        raise AmalgamationError(msg)
    solver = solver or search_solver()

    tops = []
    for side, factor in enumerate(k.factors):
        reduct = sys.relabeled({p: factor_reducts(k, s)[side] for p, s in sys.structures.items()})
        solved = solver(factor, reduct)
        if solved is None:
            return Unresolved(f"reduct system {side} has no disjoint {sys.n}-amalgam in {factor}", reduct)
        tops.append(_trimmed_top(solved))

    (top0, into0), (top1, into1) = tops
    if top0.size != top1.size:
        return Unresolved(f"trimmed completions differ in size: {top0.size} vs {top1.size}")
    aligner = _aligner(into0, into1, top0.size)
    top = superpose_structures(Superposition(top0, top1, aligner)).structure
    completed = sys.extended(top, into0)
    if (violation := verify_p_system(completed)) is not None:
        msg = f"completed system violates {violation.axiom}: {violation.detail}"
        raise AmalgamationError(msg)
    if not contains(k, top):
        return Unresolved(f"laid-over completion is not in {k}", completed)
    log.debug("super n-amalgam built", n=sys.n, size=top.size)
    return completed
