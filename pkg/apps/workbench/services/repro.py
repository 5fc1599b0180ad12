# apps/workbench/services/repro.py
# ================================================================================
"""
Runs catalog cases and compares each outcome with the expected verdict.

Cache hits are replayed unchanged; misses (and the share of hits the run's
audit seed picks) run in the worker pool.  The report is always ordered by case id.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import structlog

from apps.kernel.datatype import Verdict
from apps.kernel.exceptions import LimitExceededError, TimeLimitExceededError
from apps.kernel.services.canonical import canonical_cache_info
from apps.workbench.conf import ExitCode, ReproRunParams
from apps.workbench.schemas.records import RunRecord
from apps.workbench.services.catalog import find_cases, load_catalog
from apps.workbench.services.dsl import parse_document
from apps.workbench.services.operations import run_operation
from apps.workbench.services.runs import (
    config_hash,
    in_audit_sample,
    load_record,
    reconcile,
    run_cache,
    store_record,
)
from infrastructure.worker import run_jobs, worker_metrics

if TYPE_CHECKING:
    from apps.workbench.schemas.catalog import ReproCase
    from apps.workbench.services.runs import Backend

log = structlog.get_logger(__name__).bind(component="Repro")


def case_command(case: ReproCase) -> str:
    return f"repro:{case.id}"


def case_hash(case: ReproCase) -> str:
    return config_hash(case_command(case), {
        "operation": case.operation, "document": case.document, "params": case.params,
    })


def run_case(case: ReproCase) -> RunRecord:
    """Runs one case inline; top-level so the worker pool can pickle it.

    Size limits make the case inconclusive; the time limit propagates so the
    runner records a timeout that is never cached.
    """
    t0 = time.perf_counter()
    try:
        outcome = run_operation(case.operation, parse_document(case.document), case.params, jobs=1)
        verdict, detail, witness = outcome.verdict, outcome.detail, outcome.witness
    except TimeLimitExceededError:
        raise
    except LimitExceededError as exc:
        verdict, detail, witness = Verdict.INCONCLUSIVE, str(exc), None
    return RunRecord(
        command=case_command(case),
        config_hash=case_hash(case),
        verdict=verdict,
        detail=detail,
        witnesses=[] if witness is None else [witness],
        wall_time=round(time.perf_counter() - t0, 3),
    )


# ─── Report ─────────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class CaseResult:
    case: ReproCase
    record: RunRecord
    cached: bool

    @property
    def status(self) -> Verdict:
        """PASS when the observed verdict is the expected one."""
        if self.record.verdict == self.case.expected:
            return Verdict.PASS
        if self.record.verdict is Verdict.INCONCLUSIVE:
            return Verdict.INCONCLUSIVE
        return Verdict.FAIL


@dataclass(slots=True, frozen=True)
class ReproReport:
    results: tuple[CaseResult, ...]

    @property
    def status(self) -> Verdict:
        return Verdict.worst([r.status for r in self.results])

    @property
    def exit_code(self) -> ExitCode:
        return exit_code_for(self.status)

    def counts(self) -> dict[str, int]:
        counts = {str(v): 0 for v in Verdict}
        for r in self.results:
            counts[str(r.status)] += 1
        return counts

    def as_record(self) -> dict[str, Any]:
        """Timing-free view; two runs with the same inputs give the same record."""
        return {
            "status": str(self.status),
            "cases": [
                {
                    "id": r.case.id,
                    "operation": r.case.operation,
                    "expected": str(r.case.expected),
                    "observed": str(r.record.verdict),
                    "status": str(r.status),
                    "detail": r.record.detail,
                    "anchor": r.case.anchor,
                    "provenance": str(r.case.provenance),
                }
                for r in self.results
            ],
        }


def exit_code_for(verdict: Verdict) -> ExitCode:
    return {Verdict.PASS: ExitCode.PASS, Verdict.FAIL: ExitCode.FAIL, Verdict.INCONCLUSIVE: ExitCode.INCONCLUSIVE}[
        verdict
    ]


# ─── Runner ─────────────────────────────────────────────────────────────────────


def select_cases(case_ids: tuple[str, ...]) -> tuple[ReproCase, ...]:
    """The named cases or groups (unknown names raise ``UnknownCaseError``), or the whole catalog."""
    catalog = load_catalog()
    if not case_ids or case_ids == ("all",):
        return catalog
    chosen = {c.id: c for name in case_ids for c in find_cases(name, catalog)}
    return tuple(chosen[i] for i in sorted(chosen))


def run_repro(params: ReproRunParams, *, backend: Backend | None = None) -> ReproReport:
    backend = backend if backend is not None else run_cache()
    cases = select_cases(params.case_ids)

    cached: dict[str, RunRecord] = {}
    todo: list[ReproCase] = []
    for case in cases:
        digest = case_hash(case)
        hit = load_record(digest, backend=backend) if params.use_cache else None
        if hit is not None:
            log.debug("case replayed", case=case.id)
            cached[case.id] = hit
        if hit is None or in_audit_sample(digest, params.sample_percent, params.audit_seed):
            todo.append(case)

    fresh: dict[str, RunRecord] = {}
    for case, res in zip(todo, run_jobs(run_case, todo, label="repro-case", jobs=params.jobs), strict=True):
        if res.timed_out or res.value is None:
            fresh[case.id] = RunRecord(
                command=case_command(case), config_hash=case_hash(case), verdict=Verdict.INCONCLUSIVE,
                detail="timed out", wall_time=res.duration_s,
            )
            continue
        fresh[case.id] = res.value
        if case.id in cached:
            fresh[case.id] = reconcile(cached[case.id], res.value, backend=backend)
        elif params.use_cache:
            store_record(res.value, backend=backend)

    results = tuple(
        CaseResult(case, fresh.get(case.id) or cached[case.id], cached=case.id in cached) for case in cases
    )
    report = ReproReport(results)
    log.info(
        "repro finished",
        cases=len(results),
        replayed=len(cached),
        recomputed=len(todo),
        audit_seed=params.audit_seed,
        **report.counts(),
    )
    log.info("repro resources", **worker_metrics.as_dict(), canonical_cache=canonical_cache_info())
    return report
