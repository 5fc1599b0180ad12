"""
Job runner for independent checks – sweep instances, repro cases.

    results = run_jobs(partial(check_one, k), instances, label="ap-instance")

``jobs == 1`` runs every job inline, in order.  Otherwise jobs are offloaded
to ``jobs`` single-process executors ("slots") under asyncio; results always
come back in job-id order so the caller's merge is deterministic.

Both paths enforce the per-job time limit the same way: the job runs under a
``deadline`` that starts when the job starts, and the search loops raise
``TimeLimitExceededError`` once it passes.  A pooled job that ignores its
deadline for ``KILL_GRACE_S`` longer has its slot process killed and replaced.
"""

from __future__ import annotations

import asyncio
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import UTC, datetime
from functools import partial
from typing import TYPE_CHECKING, Any, Final

import django
import structlog
from django.apps import apps as django_apps
from tqdm import tqdm

from apps.kernel.conf import check_deadline, current_limits, deadline, install_limits
from apps.kernel.exceptions import TimeLimitExceededError

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from config.settings.base import WorkbenchLimits

# ───────────────────────── config knobs ─────────────────────────
log: Final = structlog.get_logger(__name__).bind(component="Worker")

PROGRESS_MIN_JOBS: Final[int] = 8
KILL_GRACE_S: Final[float] = 2.0


# ───────────────────────── metrics struct ───────────────────────
@dataclass(slots=True)
class WorkerMetrics:
    batches_run: int = 0
    batches_failed: int = 0
    jobs_run: int = 0
    jobs_timed_out: int = 0
    jobs_killed: int = 0
    busy_s: float = 0.0
    startup_time: datetime = field(default_factory=lambda: datetime.now(UTC))

    def record_batch(self, results: Sequence[JobResult[Any]], dur: float) -> None:
        self.batches_run += 1
        self.jobs_run += len(results)
        self.jobs_timed_out += sum(r.timed_out for r in results)
        self.busy_s += dur

    def as_dict(self) -> dict[str, Any]:
        return {
            "batches_run": self.batches_run,
            "batches_failed": self.batches_failed,
            "jobs_run": self.jobs_run,
            "jobs_timed_out": self.jobs_timed_out,
            "jobs_killed": self.jobs_killed,
            "busy_s": round(self.busy_s, 3),
            "uptime_s": round((datetime.now(UTC) - self.startup_time).total_seconds(), 1),
        }


worker_metrics = WorkerMetrics()


@dataclass(slots=True, frozen=True)
class JobResult[R]:
    job_id: int
    value: R | None
    duration_s: float
    timed_out: bool = False


# ───────────────────────── job wrapper ──────────────────────────
def _bounded[T, R](worker_fn: Callable[[T], R], timeout_s: float | None, item: T) -> tuple[bool, R | None]:
    """``(timed_out, value)`` of ``worker_fn(item)`` run under a fresh deadline."""
    try:
        with deadline(timeout_s):
            return False, worker_fn(item)
    except TimeLimitExceededError:
        # the enclosing deadline, when that is the one that passed
        check_deadline()
        return True, None


# ───────────────────────── pool workers ─────────────────────────
def _init_worker(limits: WorkbenchLimits) -> None:
    if not django_apps.ready:
        django.setup()
    install_limits(limits)


def _slot(limits: WorkbenchLimits) -> ProcessPoolExecutor:
    return ProcessPoolExecutor(max_workers=1, initializer=_init_worker, initargs=(limits,))


def _kill(slot: ProcessPoolExecutor) -> None:
    # no public way to stop a running worker before 3.14
    for proc in list((slot._processes or {}).values()):  # noqa: SLF001
        proc.kill()
    slot.shutdown(wait=False, cancel_futures=True)


def _progress(total: int, label: str) -> tqdm:
    return tqdm(total=total, desc=label, unit="job", disable=total < PROGRESS_MIN_JOBS or not sys.stderr.isatty())


def _run_inline[T, R](
    worker_fn: Callable[[T], R], items: Sequence[T], *, timeout_s: float | None, label: str
) -> list[JobResult[R]]:
    results = []
    with _progress(len(items), label) as bar:
        for i, item in enumerate(items):
            t0 = time.perf_counter()
            timed_out, value = _bounded(worker_fn, timeout_s, item)
            if timed_out:
                log.warning("job timed out", label=label, job_id=i, timeout_s=timeout_s)
            results.append(JobResult(i, value, time.perf_counter() - t0, timed_out=timed_out))
            bar.update()
    return results


async def _run_pooled[T, R](
    worker_fn: Callable[[T], R],
    items: Sequence[T],
    *,
    jobs: int,
    timeout_s: float | None,
    label: str,
) -> list[JobResult[R]]:
    loop = asyncio.get_running_loop()
    limits = current_limits()
    job = partial(_bounded, worker_fn, timeout_s)
    hard_limit = None if timeout_s is None else timeout_s + KILL_GRACE_S
    slots: asyncio.Queue[ProcessPoolExecutor] = asyncio.Queue()
    for _ in range(jobs):
        slots.put_nowait(_slot(limits))
    results: list[JobResult[R] | None] = [None] * len(items)

    async def guard(i: int, item: T, bar: tqdm) -> None:
        slot = await slots.get()
        t0 = time.perf_counter()
        try:
            async with asyncio.timeout(hard_limit):
                timed_out, value = await loop.run_in_executor(slot, job, item)
        except TimeoutError:
            log.warning("job killed", label=label, job_id=i, timeout_s=timeout_s)
            worker_metrics.jobs_killed += 1
            _kill(slot)
            slot = _slot(limits)
            timed_out, value = True, None
        finally:
            slots.put_nowait(slot)
        if timed_out:
            log.warning("job timed out", label=label, job_id=i, timeout_s=timeout_s)
        results[i] = JobResult(i, value, time.perf_counter() - t0, timed_out=timed_out)
        bar.update()

    failed = True
    try:
        with _progress(len(items), label) as bar:
            async with asyncio.TaskGroup() as tg:
                for i, item in enumerate(items):
                    tg.create_task(guard(i, item, bar))
        failed = False
    finally:
        while not slots.empty():
            slot = slots.get_nowait()
            if failed:
                _kill(slot)
            else:
                slot.shutdown(wait=False)
    return [r for r in results if r is not None]


# ───────────────────────── task processor ──────────────────────
def run_jobs[T, R](
    worker_fn: Callable[[T], R],
    items: Sequence[T],
    *,
    label: str,
    jobs: int | None = None,
    timeout_s: float | None = None,
) -> list[JobResult[R]]:
    """Run ``worker_fn`` over ``items``; one ``JobResult`` per item, in item order.

    ``timeout_s`` defaults to ``TIME_LIMIT_S``.  ``worker_fn`` must be
    picklable when ``jobs > 1``.  The first exception raised by a job
    propagates after the slots are torn down.
    """
    limits = current_limits()
    jobs = jobs or limits.JOBS
    timeout_s = timeout_s if timeout_s is not None else limits.TIME_LIMIT_S
    if not items:
        return []

    t0 = time.perf_counter()
    try:
        if jobs <= 1 or len(items) == 1:
            results = _run_inline(worker_fn, items, timeout_s=timeout_s, label=label)
        else:
            jobs = min(jobs, len(items))
            results = asyncio.run(_run_pooled(worker_fn, items, jobs=jobs, timeout_s=timeout_s, label=label))
    except ExceptionGroup as eg:
        worker_metrics.batches_failed += 1
        log.exception("Concurrent exec failed", item=label, failed=len(eg.exceptions), total=len(items))
        raise eg.exceptions[0] from None
    except Exception:
        worker_metrics.batches_failed += 1
        log.exception("Inline exec failed", item=label, total=len(items))
        raise

    worker_metrics.record_batch(results, time.perf_counter() - t0)
    log.info(
        "Concurrent exec ok",
        item=label,
        count=len(items),
        jobs=jobs,
        timed_out=sum(r.timed_out for r in results),
        dur_s=f"{time.perf_counter() - t0:.3f}",
    )
    return results
