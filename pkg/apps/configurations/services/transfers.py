# apps/configurations/services/transfers.py
# ================================================================================
"""
Configurations for product classes from configurations for the factors.

Blocks of the product witness are the factor blocks side by side, width
``n0 + n1``: the first ``n0`` positions (``y``) come from ``w0`` and the
last ``n1`` (``z``) from ``w1``.

* lex:   ``L0`` symbols also demand equal ``z`` blocks; ``E`` is ``z0 = z1``.
         ``w1`` must be injective.
* full:  ``E0`` is ``y0 = y1``, ``E1`` is ``z0 = z1``; both must be injective.
* super: plain pairing, no equality clauses and no injectivity.

Every factor entry used for one product entry must share a single target
structure.  Results are verified before they are returned.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.classes.services.enumeration import enumerate_members, enumerate_members_upto
from apps.classes.specs import ClassKind, product_signature, super_class
from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation
from apps.configurations.exceptions import ConfigurationError, InjectivityError
from apps.configurations.formulas import BlockEq, QfFormula, all_block_pairs, conj, shift_positions
from apps.configurations.services.builders import entry_for
from apps.configurations.services.verify import verified
from apps.kernel.exceptions import SignatureError
from apps.products.datatype import FullAssembly, LexAssembly, SuperDecomposition, Superposition
from apps.products.services.assembly import full_structure, lex_structure, superpose_structures
from apps.products.services.decompose import decompose_lex, decompose_super

if TYPE_CHECKING:
    from collections.abc import Sequence

    from apps.classes.specs import ClassSpec, ProductSignature
    from apps.kernel.structures import Structure

log = structlog.get_logger(__name__).bind(component="ConfigTransfer")


# ─── Shared pieces ──────────────────────────────────────────────────────────────


def _require_injective(w: ConfigWitness, side: str) -> None:
    if not w.injective:
        msg = f"the {side} configuration is not injective; apply make_injective first"
        raise InjectivityError(msg)


def _shared_target_sig(w0: ConfigWitness, w1: ConfigWitness) -> None:
    if w0.interp.target != w1.interp.target:
        msg = f"factor targets differ: [{w0.interp.target.describe()}] vs [{w1.interp.target.describe()}]"
        raise SignatureError(msg)


def _one_target(parts: Sequence[ConfigEntry], what: str) -> Structure:
    targets = {e.target for e in parts}
    if len(targets) != 1:
        msg = f"{what}: factor entries do not share one target structure"
        raise ConfigurationError(msg)
    return next(iter(targets))


def _factor_formulas(naming: ProductSignature, w0: ConfigWitness, w1: ConfigWitness) -> dict[str, QfFormula]:
    n0 = w0.width
    formulas = {naming.left.forward[name]: phi for name, phi in w0.interp.formulas}
    formulas.update({naming.right.forward[name]: shift_positions(phi, n0) for name, phi in w1.interp.formulas})
    return formulas


def _check_factor_sig(s: Structure, w: ConfigWitness, side: str) -> None:
    if s.sig != w.interp.source:
        msg = f"{side} factor over [{s.sig.describe()}], its configuration indexes [{w.interp.source.describe()}]"
        raise SignatureError(msg)


# ─── Lexicographic ──────────────────────────────────────────────────────────────


def lex_config_transfer(w0: ConfigWitness, w1: ConfigWitness, assemblies: Sequence[LexAssembly]) -> ConfigWitness:
    _require_injective(w1, "base")
    _shared_target_sig(w0, w1)
    n0, n1 = w0.width, w1.width
    z = tuple(range(n0, n0 + n1))
    naming = product_signature(ClassKind.LEX, w0.interp.source, w1.interp.source)

    formulas = _factor_formulas(naming, w0, w1)
    for name, arity in w0.interp.source.symbols:
        same_z = (BlockEq(i, k, z) for i, k in all_block_pairs(arity))
        formulas[naming.left.forward[name]] = conj(w0.interp.formula(name), *same_z)
    formulas["E"] = BlockEq(0, 1, z)
    interp = Interpretation.of(naming.sig, w0.interp.target, n0 + n1, formulas)

    entries = []
    for n, asm in enumerate(assemblies):
        _check_factor_sig(asm.base, w1, "base")
        base = entry_for(w1, asm.base)
        fibers = []
        for fiber in asm.fibers:
            _check_factor_sig(fiber, w0, "fiber")
            fibers.append(entry_for(w0, fiber))
        target = _one_target([base, *fibers], f"assembly {n}")
        built = lex_structure(asm)
        blocks = tuple(fibers[b].blocks[a] + base.blocks[b] for a, b in built.points)
        entries.append(ConfigEntry(built.structure, target, blocks))

    log.debug("lex transfer built", width=n0 + n1, entries=len(entries))
    return verified(ConfigWitness(interp, tuple(entries)), "lex transfer")


# ─── Full ───────────────────────────────────────────────────────────────────────


def full_config_transfer(w0: ConfigWitness, w1: ConfigWitness, grids: Sequence[FullAssembly]) -> ConfigWitness:
    _require_injective(w0, "left")
    _require_injective(w1, "right")
    _shared_target_sig(w0, w1)
    n0, n1 = w0.width, w1.width
    naming = product_signature(ClassKind.FULL, w0.interp.source, w1.interp.source)

    formulas = _factor_formulas(naming, w0, w1)
    formulas["E0"] = BlockEq(0, 1, tuple(range(n0)))
    formulas["E1"] = BlockEq(0, 1, tuple(range(n0, n0 + n1)))
    interp = Interpretation.of(naming.sig, w0.interp.target, n0 + n1, formulas)

    entries = []
    for n, grid in enumerate(grids):
        _check_factor_sig(grid.left, w0, "left")
        _check_factor_sig(grid.right, w1, "right")
        left, right = entry_for(w0, grid.left), entry_for(w1, grid.right)
        target = _one_target([left, right], f"grid {n}")
        built = full_structure(grid)
        blocks = tuple(left.blocks[x] + right.blocks[y] for x, y in built.points)
        entries.append(ConfigEntry(built.structure, target, blocks))

    log.debug("full transfer built", width=n0 + n1, entries=len(entries))
    return verified(ConfigWitness(interp, tuple(entries)), "full transfer")


# ─── Free superposition ─────────────────────────────────────────────────────────


def super_config_transfer(w0: ConfigWitness, w1: ConfigWitness, superposed: Sequence[Superposition]) -> ConfigWitness:
    _shared_target_sig(w0, w1)
    n0, n1 = w0.width, w1.width
    naming = product_signature(ClassKind.SUPER, w0.interp.source, w1.interp.source)
    interp = Interpretation.of(naming.sig, w0.interp.target, n0 + n1, _factor_formulas(naming, w0, w1))

    entries = []
    for n, sup in enumerate(superposed):
        _check_factor_sig(sup.left, w0, "left")
        _check_factor_sig(sup.right, w1, "right")
        left, right = entry_for(w0, sup.left), entry_for(w1, sup.right)
        target = _one_target([left, right], f"superposition {n}")
        built = superpose_structures(sup)
        blocks = tuple(left.blocks[x] + right.blocks[sup.aligner[x]] for x in built.structure.universe)
        entries.append(ConfigEntry(built.structure, target, blocks))

    log.debug("super transfer built", width=n0 + n1, entries=len(entries))
    return verified(ConfigWitness(interp, tuple(entries)), "super transfer")


# ─── Entry families ─────────────────────────────────────────────────────────────


def lex_assemblies(k: ClassSpec, max_size: int) -> list[LexAssembly]:
    """One assembly per member of the lex class ``k`` of size ≤ ``max_size``, up to isomorphism."""
    k0, k1 = k.factors
    found = []
    for s in enumerate_members_upto(k, max_size):
        asm = decompose_lex(s, k0, k1)
        if isinstance(asm, LexAssembly):
            found.append(asm)
    return found


def full_grids(k0: ClassSpec, k1: ClassSpec, max_side: int) -> list[FullAssembly]:
    """Every ``A0 ⊠ A1`` with non-empty factors of size ≤ ``max_side``."""
    lefts = [a for n in range(1, max_side + 1) for a in enumerate_members(k0, n)]
    rights = [b for n in range(1, max_side + 1) for b in enumerate_members(k1, n)]
    return [FullAssembly(a, b) for a in lefts for b in rights]


def superpositions(k0: ClassSpec, k1: ClassSpec, max_size: int) -> list[Superposition]:
    """Every member of ``k0 * k1`` of size ≤ ``max_size``, split into its two reducts."""
    found = []
    for s in enumerate_members_upto(super_class(k0, k1), max_size):
        parts = decompose_super(s, k0, k1)
        if isinstance(parts, SuperDecomposition):
            found.append(Superposition(parts.left, parts.right, tuple(s.universe)))
    return found
