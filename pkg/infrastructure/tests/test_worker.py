import time

import pytest

from apps.kernel.conf import check_deadline, deadline
from apps.kernel.exceptions import LimitExceededError, TimeLimitExceededError
from infrastructure.worker import KILL_GRACE_S, run_jobs, worker_metrics


def _spin(n: int) -> str:
    """Returns at once for 0, otherwise loops until the deadline stops it."""
    while n:
        check_deadline()
        time.sleep(0.01)
    return "done"


def _stubborn(n: int) -> str:
    if n:
        time.sleep(60)
    return "done"


def _nap(ticks: int) -> str:
    for _ in range(ticks):
        check_deadline()
        time.sleep(0.01)
    return "rested"


def _square(n: int) -> int:
    return n * n


# ─── Deadlines ──────────────────────────────────────────────────────────────────


def test_deadline_raises_once_passed():
    with deadline(0.01):
        check_deadline()
        time.sleep(0.05)
        with pytest.raises(TimeLimitExceededError, match="time limit of 0.01s exceeded"):
            check_deadline()


def test_nested_deadlines_only_tighten():
    with deadline(0.01), deadline(60):
        time.sleep(0.05)
        with pytest.raises(TimeLimitExceededError):
            check_deadline()
    with deadline(0.01), deadline(None):
        time.sleep(0.05)
        with pytest.raises(TimeLimitExceededError):
            check_deadline()


def test_no_deadline_never_raises():
    check_deadline()
    with deadline(None):
        check_deadline()


def test_time_limit_is_a_limit_error():
    assert issubclass(TimeLimitExceededError, LimitExceededError)


# ─── Runner ─────────────────────────────────────────────────────────────────────


@pytest.mark.parametrize("jobs", [1, 3])
def test_results_come_back_in_item_order(jobs):
    results = run_jobs(_square, [3, 1, 2], label="square", jobs=jobs)
    assert [r.job_id for r in results] == [0, 1, 2]
    assert [r.value for r in results] == [9, 1, 4]
    assert not any(r.timed_out for r in results)


def test_empty_batch():
    assert run_jobs(_square, [], label="square", jobs=2) == []


def test_inline_and_pooled_agree_under_a_time_limit():
    outcomes = [
        [(r.timed_out, r.value) for r in run_jobs(_spin, [0, 1, 0], label="spin", jobs=jobs, timeout_s=0.2)]
        for jobs in (1, 3)
    ]
    assert outcomes[0] == outcomes[1] == [(False, "done"), (True, None), (False, "done")]


def test_single_job_batch_still_gets_the_limit():
    [result] = run_jobs(_spin, [1], label="spin", jobs=8, timeout_s=0.1)
    assert result.timed_out


def test_unresponsive_job_is_killed_and_its_slot_replaced():
    killed = worker_metrics.jobs_killed
    t0 = time.perf_counter()
    results = run_jobs(_stubborn, [1, 0, 0, 0], label="stubborn", jobs=2, timeout_s=0.1)
    assert time.perf_counter() - t0 < 30
    assert results[0].timed_out
    assert results[0].duration_s >= KILL_GRACE_S
    assert [r.value for r in results[1:]] == ["done"] * 3
    assert worker_metrics.jobs_killed == killed + 1


def test_queued_jobs_do_not_spend_their_limit_waiting():
    # the second pair waits about 0.4s for a slot, then needs 0.4s of its own 0.7s
    results = run_jobs(_nap, [40, 40, 40, 40], label="nap", jobs=2, timeout_s=0.7)
    assert [r.value for r in results] == ["rested"] * 4


def test_job_errors_propagate():
    with pytest.raises(TypeError):
        run_jobs(_square, [1, "x"], label="square", jobs=1)
