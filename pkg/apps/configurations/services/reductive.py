# apps/configurations/services/reductive.py
# ================================================================================
"""Reductive subclasses: every member of ``k0`` is, up to isomorphism, a reduct of a member of ``k1``."""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from apps.classes.services.enumeration import enumerate_members
from apps.kernel.datatype import CheckReport, Verdict
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.canonical import canonical_form
from apps.kernel.structures import Structure

if TYPE_CHECKING:
    from collections.abc import Mapping

    from apps.classes.specs import ClassSpec
    from apps.kernel.services.canonical import CanonicalForm

log = structlog.get_logger(__name__).bind(component="ReductiveSubclass")


def _reduct_plan(k0: ClassSpec, k1: ClassSpec, rename: Mapping[str, str]) -> list[str]:
    """For each symbol of ``k0``, the ``k1`` symbol it is read from."""
    back = {new: old for old, new in rename.items()}
    plan = []
    for name, arity in k0.sig.symbols:
        source = back.get(name, name)
        if source not in k1.sig or k1.sig.arity(source) != arity:
            msg = f"symbol {name}/{arity} of [{k0.sig.describe()}] has no counterpart in [{k1.sig.describe()}]"
            raise SignatureError(msg)
        plan.append(source)
    return plan


def check_reductive_subclass(
    k0: ClassSpec, k1: ClassSpec, size: int, *, rename: Mapping[str, str] | None = None,
) -> CheckReport:
    """Every ``A ∈ k0`` with ``|A| ≤ size`` is ``≅`` the ``sig(k0)``-reduct of some ``B ∈ k1`` of the same size.

    ``rename`` maps ``k1`` symbol names onto ``k0`` names (``{"R": "E"}`` for
    graphs inside digraphs).  FAIL carries the first ``A`` with no such ``B``.
    """
    plan = _reduct_plan(k0, k1, rename or {})
    checked = 0
    for n in range(size + 1):
        reducts: set[CanonicalForm] = {
            canonical_form(Structure(k0.sig, n, tuple(b.rel(source) for source in plan))) for b in enumerate_members(k1, n)
        }
        for a in enumerate_members(k0, n):
            checked += 1
            if canonical_form(a) not in reducts:
                log.info("reductive subclass fails", k0=str(k0), k1=str(k1), size=n)
                return CheckReport(
                    verdict=Verdict.FAIL,
                    detail=f"no member of {k1} of size {n} has this member of {k0} as a reduct",
                    witness=a,
                    stats={"checked": checked},
                )
    log.info("reductive subclass holds", k0=str(k0), k1=str(k1), size=size, checked=checked)
    return CheckReport(verdict=Verdict.PASS, detail=f"checked every member up to size {size}", stats={"checked": checked})
