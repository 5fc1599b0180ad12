# apps/workbench/services/operations.py
# ================================================================================
"""
Registry of the operations a catalog case or a command can run.

Every operation reads its structures and classes by name from a parsed DSL
document (``K`` and ``L`` for classes; ``S``, ``A``, ``B``, ``B0``, ``B1`` and
``C`` for structures) and its numeric inputs from a params mapping validated
by a pydantic model.  It returns an ``Outcome``: a verdict, a one-line detail
and a JSON-ready witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Final, Literal

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from apps.amalgamation.conf import AmalgamSearchParams, DisjointAmalgamParams
from apps.amalgamation.datatype import AmalgInstance, Unresolved
from apps.amalgamation.services.amalgams import check_ap, check_ap_instance, check_hp, check_jep
from apps.amalgamation.services.systems import check_disjoint_n
from apps.classes.services.membership import explain_membership, known_hereditary
from apps.classes.specs import PRODUCT_KINDS, ClassKind
from apps.configurations.conf import ConfigBuildParams
from apps.configurations.services.builders import builtin_configuration, configuration_entries
from apps.configurations.services.calculus import compose_configurations
from apps.configurations.services.reductive import check_reductive_subclass
from apps.configurations.services.verify import verify_configuration
from apps.kernel.datatype import Verdict
from apps.partition.conf import ColoringSearchParams, DssSearchParams
from apps.partition.datatype import DssInstance
from apps.partition.exceptions import HypothesisError
from apps.partition.services.coloring import (
    find_bad_coloring,
    find_indivisibility_witness,
    verify_indivisibility_witness,
)
from apps.partition.services.products import (
    full_indivisibility_witness,
    lex_indivisibility_witness,
    search_super_indivisibility,
)
from apps.partition.services.selfsim import (
    check_dss,
    check_dss_instance,
    dss_from_3amalg,
    super_dss_transfer,
    verify_dss_witness,
)
from apps.products.datatype import Inconclusive, Rejection
from apps.products.services.decompose import decompose_full, decompose_lex, decompose_super
from apps.products.services.identities import age_product_check, aut_order_product_check
from apps.workbench.exceptions import CatalogError
from apps.workbench.services.codec import witness_record

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from apps.kernel.datatype import CheckReport
    from apps.workbench.services.dsl import DslDocument

log = structlog.get_logger(__name__).bind(component="Operations")


@dataclass(slots=True, frozen=True)
class Outcome:
    verdict: Verdict
    detail: str
    witness: Any = None


type Operation = Callable[[DslDocument, Mapping[str, Any], int | None], Outcome]

OPERATIONS: Final[dict[str, Operation]] = {}


def operation(name: str) -> Callable[[Operation], Operation]:
    def register(fn: Operation) -> Operation:
        OPERATIONS[name] = fn
        return fn

    return register


def run_operation(name: str, doc: DslDocument, params: Mapping[str, Any], *, jobs: int | None = None) -> Outcome:
    try:
        fn = OPERATIONS[name]
    except KeyError:
        msg = f"unknown operation {name!r}; known: {', '.join(sorted(OPERATIONS))}"
        raise CatalogError(msg) from None
    outcome = fn(doc, params, jobs)
    log.debug("operation done", operation=name, verdict=str(outcome.verdict))
    return outcome


# ─── Helpers ────────────────────────────────────────────────────────────────────


class _Params(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


def _validated[P: BaseModel](model: type[P], params: Mapping[str, Any]) -> P:
    try:
        return model.model_validate(dict(params))
    except ValidationError as exc:
        msg = f"bad parameters for {model.__name__}: {exc.errors(include_url=False)}"
        raise CatalogError(msg) from None


def _from_report(report: CheckReport) -> Outcome:
    return Outcome(report.verdict, report.detail, witness_record(report.witness))


def _found(value: Any, *, certified: bool, found: str, missing: str) -> Outcome:
    """PASS with a witness; a miss is FAIL only when the search was exhaustive."""
    if value is not None:
        return Outcome(Verdict.PASS, found, witness_record(value))
    return Outcome(Verdict.FAIL if certified else Verdict.INCONCLUSIVE, missing)


# ─── Classes ────────────────────────────────────────────────────────────────────


@operation("membership")
def _membership(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    _validated(_Params, params)
    m = explain_membership(doc.klass("K"), doc.structure("S"))
    return Outcome(Verdict.PASS if m.member else Verdict.FAIL, m.reason or "member", witness_record(m))


class _HereditaryParams(_Params):
    size: int = Field(ge=0, le=8)


@operation("check_hp")
def _check_hp(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_HereditaryParams, params)
    return _from_report(check_hp(doc.klass("K"), p.size))


# ─── Amalgamation ───────────────────────────────────────────────────────────────


class _InstanceParams(_Params):
    f0: tuple[int, ...]
    f1: tuple[int, ...]
    host: int = Field(ge=0, le=16)
    strong: bool = False


@operation("ap_instance")
def _ap_instance(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_InstanceParams, params)
    k = doc.klass("K")
    inst = AmalgInstance.of(doc.structure("A"), doc.structure("B0"), doc.structure("B1"), p.f0, p.f1)
    pushout = inst.b0.size + inst.b1.size - inst.a.size
    return _found(
        check_ap_instance(k, inst, p.host, strong=p.strong),
        certified=known_hereditary(k) and p.host >= pushout,
        found="amalgam found",
        missing=f"no amalgam up to size {p.host}",
    )


@operation("check_ap")
def _check_ap(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(AmalgamSearchParams, params)
    return _from_report(check_ap(doc.klass("K"), p.base, p.host, strong=p.strong, jobs=jobs))


@operation("check_jep")
def _check_jep(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(AmalgamSearchParams, params)
    return _from_report(check_jep(doc.klass("K"), p.base, p.host, jobs=jobs))


@operation("disjoint_n")
def _disjoint_n(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(DisjointAmalgamParams, params)
    return _from_report(check_disjoint_n(doc.klass("K"), p.n, p.base, p.pad, jobs=jobs))


# ─── Definable self-similarity ──────────────────────────────────────────────────


class _DssInstanceParams(_Params):
    f: tuple[int, ...]
    base: tuple[int, ...]
    pivot: int = Field(ge=0)
    g: tuple[int, ...]
    host: int | None = Field(default=None, ge=0, le=16)
    disjoint: bool = False


def _dss_instance(doc: DslDocument, p: _DssInstanceParams) -> DssInstance:
    return DssInstance.of(doc.structure("A"), doc.structure("B"), doc.structure("C"), p.f, p.base, p.pivot, p.g)


@operation("dss_instance")
def _dss_instance_op(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_DssInstanceParams, params)
    k, inst = doc.klass("K"), _dss_instance(doc, p)
    bound = p.host if p.host is not None else inst.b.size + inst.c.size
    return _found(
        check_dss_instance(k, inst, p.host, disjoint=p.disjoint),
        certified=known_hereditary(k) and bound >= inst.b.size + inst.c.size - inst.a.size,
        found="witness found",
        missing=f"no witness up to size {bound}",
    )


@operation("check_dss")
def _check_dss(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(DssSearchParams, params)
    return _from_report(check_dss(doc.klass("K"), p.size, p.host, one_point=p.one_point, jobs=jobs))


@operation("dss_from_3amalg")
def _dss_from_3amalg(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_DssInstanceParams, params)
    k, inst = doc.klass("K"), _dss_instance(doc, p)
    try:
        w = dss_from_3amalg(k, inst)
    except HypothesisError as exc:
        return Outcome(Verdict.FAIL, f"hypotheses do not hold: {exc}")
    if (reason := verify_dss_witness(k, inst, w)) is not None:
        return Outcome(Verdict.FAIL, f"built witness does not verify: {reason}", witness_record(w))
    return Outcome(Verdict.PASS, "built witness verifies", witness_record(w))


@operation("super_dss_transfer")
def _super_dss_transfer(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_DssInstanceParams, params)
    k, inst = doc.klass("K"), _dss_instance(doc, p)
    w = super_dss_transfer(k, inst)
    if isinstance(w, Unresolved):
        return Outcome(Verdict.INCONCLUSIVE, w.reason, witness_record(w))
    if (reason := verify_dss_witness(k, inst, w)) is not None:
        return Outcome(Verdict.FAIL, f"transferred witness does not verify: {reason}", witness_record(w))
    return Outcome(Verdict.PASS, "transferred witness verifies", witness_record(w))


# ─── Indivisibility ─────────────────────────────────────────────────────────────


@operation("indivisibility_search")
def _indivisibility_search(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(ColoringSearchParams, params)
    b = find_indivisibility_witness(doc.klass("K"), doc.structure("A"), p.colors, p.max_size, jobs=jobs)
    if b is None:
        return Outcome(Verdict.INCONCLUSIVE, f"no witness up to size {p.max_size}")
    return Outcome(Verdict.PASS, f"witness of size {b.size}", witness_record(b))


class _ColorParams(_Params):
    colors: int = Field(default=2, ge=2, le=64)


@operation("indivisibility_verify")
def _indivisibility_verify(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_ColorParams, params)
    a, b = doc.structure("A"), doc.structure("B")
    if verify_indivisibility_witness(doc.klass("K"), a, p.colors, b):
        return Outcome(Verdict.PASS, f"every {p.colors}-coloring has a monochromatic copy")
    bad = find_bad_coloring(a, b, p.colors)
    return Outcome(Verdict.FAIL, "a coloring avoids monochromatic copies", witness_record(bad))


def _product_witness(doc: DslDocument, params: Mapping[str, Any], builder: Callable[..., Any]) -> Outcome:
    p = _validated(_ColorParams, params)
    k, a = doc.klass("K"), doc.structure("A")
    w = builder(k, a, p.colors)
    if isinstance(w, Unresolved):
        return Outcome(Verdict.INCONCLUSIVE, w.reason, witness_record(w))
    if not verify_indivisibility_witness(k, a, p.colors, w.structure):
        return Outcome(Verdict.FAIL, "built witness does not verify", witness_record(w))
    return Outcome(Verdict.PASS, f"built witness of size {w.structure.size} verifies", witness_record(w))


@operation("lex_witness")
def _lex_witness(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    return _product_witness(doc, params, lex_indivisibility_witness)


@operation("full_witness")
def _full_witness(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    return _product_witness(doc, params, full_indivisibility_witness)


class _SuperSearchParams(ColoringSearchParams):
    max_pattern: int = Field(default=1, ge=1, le=4)


@operation("super_indivisibility")
def _super_indivisibility(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_SuperSearchParams, params)
    outcomes = search_super_indivisibility(doc.klass("K"), doc.klass("L"), p.max_pattern, p.colors, p.max_size,
                                           jobs=jobs)
    found = sum(o.witness is not None for o in outcomes)
    detail = f"witnesses for {found} of {len(outcomes)} patterns up to size {p.max_size}"
    return Outcome(Verdict.INCONCLUSIVE, detail, witness_record(outcomes))


# ─── Products ───────────────────────────────────────────────────────────────────


class _DecomposeParams(_Params):
    bound: int = Field(default=4, ge=0, le=8)


@operation("decompose")
def _decompose(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_DecomposeParams, params)
    k, s = doc.klass("K"), doc.structure("S")
    if k.kind not in PRODUCT_KINDS:
        msg = f"{k.describe()} is not a product class"
        raise CatalogError(msg)
    k0, k1 = k.factors
    match k.kind:
        case ClassKind.LEX:
            parts = decompose_lex(s, k0, k1)
        case ClassKind.FULL:
            parts = decompose_full(s, k0, k1, p.bound)
        case _:
            parts = decompose_super(s, k0, k1)
    if isinstance(parts, Inconclusive):
        return Outcome(Verdict.INCONCLUSIVE, parts.reason, witness_record(parts))
    if isinstance(parts, Rejection):
        return Outcome(Verdict.FAIL, parts.reason, witness_record(parts))
    return Outcome(Verdict.PASS, f"decomposes over {k.kind}", witness_record(parts))


class _AgeParams(_Params):
    mode: Literal["lex", "full"]
    size: int = Field(ge=0, le=6)


@operation("age_identity")
def _age_identity(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_AgeParams, params)
    return _from_report(age_product_check(doc.structure("A"), doc.structure("B"), p.mode, p.size))


@operation("aut_identity")
def _aut_identity(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    _validated(_Params, params)
    return _from_report(aut_order_product_check(doc.structure("A"), doc.structure("B")))


# ─── Configurations ─────────────────────────────────────────────────────────────


def verification_outcome(w: Any, jobs: int | None) -> Outcome:
    if (violation := verify_configuration(w, jobs=jobs)) is not None:
        return Outcome(Verdict.FAIL, violation.message, witness_record(violation))
    return Outcome(Verdict.PASS, f"{len(w.entries)} entries verify at width {w.width}")


@operation("configuration_build")
def _configuration_build(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(ConfigBuildParams, params)
    return verification_outcome(builtin_configuration(p.name, p.max_size), jobs)


class _ComposeParams(_Params):
    outer: Literal["dg_to_g", "g_to_po", "g_to_t"]
    inner: Literal["dg_to_g", "g_to_po", "g_to_t"]
    max_size: int = Field(default=3, ge=0, le=5)


@operation("configuration_compose")
def _configuration_compose(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_ComposeParams, params)
    outer = builtin_configuration(p.outer, p.max_size)
    inner = configuration_entries(p.inner, [e.target for e in outer.entries])
    return verification_outcome(compose_configurations(outer, inner), jobs)


class _ReductiveParams(_Params):
    size: int = Field(ge=0, le=6)
    rename: dict[str, str] = Field(default_factory=dict)


@operation("reductive")
def _reductive(doc: DslDocument, params: Mapping[str, Any], jobs: int | None) -> Outcome:
    p = _validated(_ReductiveParams, params)
    return _from_report(check_reductive_subclass(doc.klass("K"), doc.klass("L"), p.size, rename=p.rename))
