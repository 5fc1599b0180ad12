# apps/configurations/services/builders.py
# ================================================================================
"""
Configuration witnesses built from scratch.

* ``identity_configuration``  – every structure into itself, width 1
* ``inclusion_configuration`` – every structure into one shared target, width 1
* ``builtin_configuration``   – digraphs → graphs, graphs → posets, graphs → tournaments

The three builtins double the index structure: element ``a`` becomes the
pair ``(a, 0), (a, 1)`` of ``A × 2`` (numbered ``2a`` and ``2a + 1``) and
``f_A(a)`` is that pair.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.classes.services.builtins import builtin
from apps.classes.services.enumeration import enumerate_members_upto
from apps.classes.services.membership import explain_membership
from apps.configurations.conf import BUILTIN_SHAPES
from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation
from apps.configurations.exceptions import ConfigurationError
from apps.configurations.formulas import Eq, Not, QfFormula, Var, atom, conj
from apps.configurations.services.verify import verified
from apps.kernel.builders import digraph, graph
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.embeddings import find_embedding
from apps.kernel.structures import Signature, Structure

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

log = structlog.get_logger(__name__).bind(component="ConfigBuilders")


# ─── Shared helpers ─────────────────────────────────────────────────────────────


def copy_formulas(sig: Signature, via: Mapping[str, str] | None = None) -> dict[str, QfFormula]:
    """``R ↦ S(x0.0, …, x{m-1}.0)`` with ``S = via[R]``, default ``R`` itself."""
    via = via or {}
    return {name: atom(via.get(name, name), *((i, 0) for i in range(arity))) for name, arity in sig.symbols}


def _common_signature(structures: Sequence[Structure], sig: Signature | None) -> Signature:
    if sig is None:
        if not structures:
            msg = "no structures and no signature given"
            raise ConfigurationError(msg)
        sig = structures[0].sig
    for s in structures:
        if s.sig != sig:
            msg = f"structure over [{s.sig.describe()}] in a family over [{sig.describe()}]"
            raise SignatureError(msg)
    return sig


def disjoint_union(structures: Sequence[Structure], sig: Signature | None = None) -> Structure:
    """Copies laid side by side in order; copy ``i`` starts at the sum of the earlier sizes."""
    sig = _common_signature(structures, sig)
    offset = 0
    relations: list[set[tuple[int, ...]]] = [set() for _ in sig.symbols]
    for s in structures:
        for k, rel in enumerate(s.relations):
            relations[k].update(tuple(x + offset for x in t) for t in rel)
        offset += s.size
    return Structure(sig, offset, tuple(frozenset(r) for r in relations))


def entry_for(w: ConfigWitness, s: Structure) -> ConfigEntry:
    """The entry of ``w`` indexed by ``s``, or one indexed by a copy of ``s`` pulled back along the isomorphism."""
    for e in w.entries:
        if e.index == s:
            return e
    shape = [len(r) for r in s.relations]
    for e in w.entries:
        if e.index.size != s.size or [len(r) for r in e.index.relations] != shape:
            continue
        if (iso := find_embedding(s, e.index)) is not None:
            return ConfigEntry(s, e.target, tuple(e.blocks[iso(x)] for x in s.universe))
    msg = f"no entry for {s!r}"
    raise ConfigurationError(msg)


# ─── Identity and inclusion ─────────────────────────────────────────────────────


def identity_configuration(structures: Sequence[Structure], sig: Signature | None = None) -> ConfigWitness:
    sig = _common_signature(structures, sig)
    interp = Interpretation.of(sig, sig, 1, copy_formulas(sig))
    entries = tuple(ConfigEntry(s, s, tuple((x,) for x in s.universe)) for s in structures)
    return ConfigWitness(interp, entries)


def inclusion_configuration(
    structures: Sequence[Structure],
    target: Structure | None = None,
    *,
    sig: Signature | None = None,
    via: Mapping[str, str] | None = None,
) -> ConfigWitness:
    """Width 1, injective; ``target`` defaults to the disjoint union of ``structures``.

    An explicit ``target`` may carry other symbols: symbol ``R`` is read as
    ``via[R]`` there (default ``R``) and each structure goes to its first
    embedding into that reduct.
    """
    via = via or {}
    sig = _common_signature(structures, sig)
    if target is None:
        target = disjoint_union(structures, sig)
        offsets = [sum(s.size for s in structures[:i]) for i in range(len(structures))]
        maps = [tuple(range(o, o + s.size)) for o, s in zip(offsets, structures, strict=True)]
    else:
        for name, arity in sig.symbols:
            read = via.get(name, name)
            if read not in target.sig or target.sig.arity(read) != arity:
                msg = f"target over [{target.sig.describe()}] has no {arity}-ary symbol {read!r} for {name!r}"
                raise SignatureError(msg)
        reduct = Structure(sig, target.size, tuple(target.rel(via.get(n, n)) for n in sig.names))
        maps = []
        for s in structures:
            if (e := find_embedding(s, reduct)) is None:
                msg = f"{s!r} does not embed into the target"
                raise ConfigurationError(msg)
            maps.append(e.map)
    interp = Interpretation.of(sig, target.sig, 1, copy_formulas(sig, via))
    entries = tuple(ConfigEntry(s, target, tuple((y,) for y in m)) for s, m in zip(structures, maps, strict=True))
    return ConfigWitness(interp, entries)


# ─── Doubling constructions ─────────────────────────────────────────────────────


def _dg_to_g_target(a: Structure) -> Structure:
    # (a,0) – (b,1) exactly when R(a,b)
    return graph(2 * a.size, [(2 * x, 2 * y + 1) for x, y in a.rel("R")])


def _g_to_po_target(a: Structure) -> Structure:
    # (a,t) < (b,s) iff t < s and E(a,b); chains have length one, so this is transitive
    return digraph(2 * a.size, [(2 * x, 2 * y + 1) for x, y in a.rel("E")])


def _g_to_t_target(a: Structure) -> Structure:
    edges = a.rel("E")
    arcs = [(2 * x, 2 * x + 1) for x in a.universe]
    for x in a.universe:
        for y in a.universe:
            if x == y:
                continue
            arcs.append((2 * x, 2 * y + 1) if (x, y) in edges else (2 * x + 1, 2 * y))
            if x < y:
                arcs += [(2 * x, 2 * y), (2 * x + 1, 2 * y + 1)]
    return digraph(2 * a.size, arcs)


_BOTH_WAYS = conj(atom("R", (0, 0), (1, 1)), atom("R", (1, 0), (0, 1)))

_DOUBLINGS: dict[str, tuple[str, QfFormula, Callable[[Structure], Structure]]] = {
    "dg_to_g": ("R", atom("E", (0, 0), (1, 1)), _dg_to_g_target),
    "g_to_po": ("E", _BOTH_WAYS, _g_to_po_target),
    "g_to_t": ("E", conj(_BOTH_WAYS, Not(Eq(Var(0, 0), Var(1, 0)))), _g_to_t_target),
}


def configuration_entries(name: str, index_structures: Sequence[Structure]) -> ConfigWitness:
    """Builtin ``name`` over exactly ``index_structures``; every target's membership is checked."""
    if name not in _DOUBLINGS:
        msg = f"unknown builtin configuration {name!r} (known: {', '.join(_DOUBLINGS)})"
        raise ConfigurationError(msg)
    source_name, target_name, width = BUILTIN_SHAPES[name]
    source, target = builtin(source_name), builtin(target_name)
    symbol, phi, double = _DOUBLINGS[name]

    entries = []
    for a in index_structures:
        if not (m := explain_membership(source, a)):
            msg = f"index structure is not in {source}: {m.reason}"
            raise ConfigurationError(msg)
        doubled = double(a)
        if not (m := explain_membership(target, doubled)):
            msg = f"A × 2 is not in {target}: {m.reason}"
            raise ConfigurationError(msg)
        entries.append(ConfigEntry(a, doubled, tuple((2 * x, 2 * x + 1) for x in a.universe)))

    interp = Interpretation.of(source.sig, target.sig, width, {symbol: phi})
    w = ConfigWitness(interp, tuple(entries))
    log.debug("builtin configuration built", name=name, entries=len(entries))
    return verified(w, name)


def builtin_configuration(name: str, max_size: int) -> ConfigWitness:
    """``configuration_entries`` over every source structure of size ≤ ``max_size``, up to isomorphism."""
    if name not in BUILTIN_SHAPES:
        msg = f"unknown builtin configuration {name!r} (known: {', '.join(BUILTIN_SHAPES)})"
        raise ConfigurationError(msg)
    return configuration_entries(name, enumerate_members_upto(builtin(BUILTIN_SHAPES[name][0]), max_size))
