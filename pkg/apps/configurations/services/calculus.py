# apps/configurations/services/calculus.py
# ================================================================================
"""
Composition and injectivization.

``compose_configurations(outer, inner)`` replaces every target atom ``S`` in
``I(R)`` by ``J(S)`` read on the matching sub-blocks, and turns every
equality between two outer coordinates into equality of their inner blocks.
That last step is only sound when ``inner`` is injective, so it is required.
Widths multiply.

``make_injective(w)`` appends a tag coordinate ``a ↦ a`` to every block; the
formulas ignore it.  The target must have at least ``|A|`` elements, which is
all the finite setting keeps of "the model is infinite".
"""

from __future__ import annotations

import structlog

from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation
from apps.configurations.exceptions import ConfigurationError, InjectivityError
from apps.configurations.formulas import (
    Atom,
    Eq,
    QfFormula,
    Var,
    conj,
    expand_block_equalities,
    map_leaves,
    substitute,
)
from apps.configurations.services.builders import entry_for
from apps.configurations.services.verify import verified
from apps.kernel.exceptions import SignatureError

log = structlog.get_logger(__name__).bind(component="ConfigCalculus")


# ─── Composition ────────────────────────────────────────────────────────────────


def _composed_formula(phi: QfFormula, inner: Interpretation) -> QfFormula:
    k = inner.width

    def leaf(f: QfFormula) -> QfFormula:
        match f:
            case Atom(symbol, args):
                # x{q}.{p} of J(S) is position p of the block of args[q]
                return substitute(
                    inner.formula(symbol), lambda v: Var(args[v.arg].arg, args[v.arg].pos * k + v.pos),
                )
            case Eq(left, right):
                return conj(*(Eq(Var(left.arg, left.pos * k + p), Var(right.arg, right.pos * k + p)) for p in range(k)))
        return f

    return map_leaves(expand_block_equalities(phi), leaf)


def compose_configurations(outer: ConfigWitness, inner: ConfigWitness) -> ConfigWitness:
    """``outer`` maps into members of ``inner``'s index class; the result maps into ``inner``'s targets."""
    if not inner.injective:
        msg = "the inner configuration is not injective; apply make_injective first"
        raise InjectivityError(msg)
    if outer.interp.target != inner.interp.source:
        msg = (
            f"outer targets are over [{outer.interp.target.describe()}], "
            f"inner indexes over [{inner.interp.source.describe()}]"
        )
        raise SignatureError(msg)

    k = inner.width
    formulas = {name: _composed_formula(phi, inner.interp) for name, phi in outer.interp.formulas}
    interp = Interpretation.of(outer.interp.source, inner.interp.target, outer.width * k, formulas)

    entries = []
    for e in outer.entries:
        g = entry_for(inner, e.target)
        blocks = tuple(tuple(x for y in block for x in g.blocks[y]) for block in e.blocks)
        entries.append(ConfigEntry(e.index, g.target, blocks))

    log.debug("configurations composed", outer=outer.width, inner=k, entries=len(entries))
    return verified(ConfigWitness(interp, tuple(entries)), "composition")


# ─── Injectivization ────────────────────────────────────────────────────────────


def make_injective(w: ConfigWitness) -> ConfigWitness:
    for n, e in enumerate(w.entries):
        if e.target.size < e.index.size:
            msg = f"entry {n}: target has {e.target.size} elements, fewer than the {e.index.size} needed to tag"
            raise ConfigurationError(msg)
    interp = Interpretation(w.interp.source, w.interp.target, w.width + 1, w.interp.formulas)
    entries = tuple(
        ConfigEntry(e.index, e.target, tuple((*block, a) for a, block in enumerate(e.blocks))) for e in w.entries
    )
    return verified(ConfigWitness(interp, entries), "injective configuration")
