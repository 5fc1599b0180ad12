import pytest
import structlog.testing

from apps.kernel.conf import current_limits, override_limits
from apps.kernel.datatype import Verdict
from apps.workbench.conf import ExitCode, ReproRunParams
from apps.workbench.exceptions import UnknownCaseError
from apps.workbench.schemas.catalog import Provenance, ReproCase
from apps.workbench.schemas.records import RunRecord
from apps.workbench.services import repro
from apps.workbench.services.catalog import find_case
from apps.workbench.services.repro import CaseResult, ReproReport, case_hash, run_case, run_repro
from apps.workbench.services.runs import config_hash, in_audit_sample, load_record, reconcile, store_record

FAST = ("triangle-is-planar", "k33-is-not-planar", "graphs-edge-witness-below-three")


def _case(expected: Verdict) -> ReproCase:
    return ReproCase(id="stub-case", operation="membership", expected=expected, anchor="stub",
                     provenance=Provenance.TRIVIAL)


def _record(verdict: Verdict, witnesses: list | None = None) -> RunRecord:
    return RunRecord(command="repro:stub-case", config_hash="0" * 64, verdict=verdict, witnesses=witnesses or [],
                     wall_time=0.0)


# ─── Statuses and exit codes ────────────────────────────────────────────────────


@pytest.mark.parametrize(("expected", "observed", "status"), [
    (Verdict.FAIL, Verdict.FAIL, Verdict.PASS),
    (Verdict.INCONCLUSIVE, Verdict.INCONCLUSIVE, Verdict.PASS),
    (Verdict.FAIL, Verdict.PASS, Verdict.FAIL),
    (Verdict.PASS, Verdict.INCONCLUSIVE, Verdict.INCONCLUSIVE),
])
def test_case_status_compares_with_expectation(expected, observed, status):
    assert CaseResult(_case(expected), _record(observed), cached=False).status is status


@pytest.mark.parametrize(("statuses", "code"), [
    ([], ExitCode.PASS),
    ([Verdict.PASS, Verdict.PASS], ExitCode.PASS),
    ([Verdict.PASS, Verdict.INCONCLUSIVE], ExitCode.INCONCLUSIVE),
    ([Verdict.INCONCLUSIVE, Verdict.FAIL], ExitCode.FAIL),
])
def test_report_exit_code(statuses, code):
    # an expectation and an observation that give each status
    wanted = {Verdict.PASS: Verdict.PASS, Verdict.FAIL: Verdict.FAIL, Verdict.INCONCLUSIVE: Verdict.PASS}
    observed = {Verdict.PASS: Verdict.PASS, Verdict.FAIL: Verdict.PASS, Verdict.INCONCLUSIVE: Verdict.INCONCLUSIVE}
    results = tuple(CaseResult(_case(wanted[s]), _record(observed[s]), cached=False) for s in statuses)
    report = ReproReport(results)
    assert [r.status for r in results] == statuses
    assert report.exit_code is code


# ─── Running cases ──────────────────────────────────────────────────────────────


def test_run_case_reaches_the_expected_verdict():
    case = find_case("k33-is-not-planar")
    record = run_case(case)
    assert record.verdict is Verdict.FAIL
    assert record.config_hash == case_hash(case)
    assert record.command == "repro:k33-is-not-planar"


def test_lex_witness_stops_at_the_joint_embedding_step():
    record = run_case(find_case("ex-jepless-lex-not-indivisible"))
    assert record.verdict is Verdict.INCONCLUSIVE
    assert "joint embedding" in record.detail


def test_selected_cases_pass_in_id_order(run_backend):
    report = run_repro(ReproRunParams(case_ids=FAST), backend=run_backend)
    assert [r.case.id for r in report.results] == sorted(FAST)
    assert report.status is Verdict.PASS
    assert report.exit_code is ExitCode.PASS
    assert report.counts() == {"pass": 3, "fail": 0, "inconclusive": 0}
    assert not any(r.cached for r in report.results)


def test_replay_returns_the_stored_record(run_backend):
    params = ReproRunParams(case_ids=FAST, sample_percent=0)
    first = run_repro(params, backend=run_backend)
    second = run_repro(params, backend=run_backend)
    assert all(r.cached for r in second.results)
    assert [r.record for r in second.results] == [r.record for r in first.results]
    assert second.as_record() == first.as_record()


def test_report_record_has_no_timings(run_backend):
    record = run_repro(ReproRunParams(case_ids=FAST[:1]), backend=run_backend).as_record()
    assert record["status"] == "pass"
    assert set(record["cases"][0]) == {
        "id", "operation", "expected", "observed", "status", "detail", "anchor", "provenance",
    }


def test_without_cache_nothing_is_stored(run_backend):
    run_repro(ReproRunParams(case_ids=FAST[:1], use_cache=False), backend=run_backend)
    assert load_record(case_hash(find_case(FAST[0])), backend=run_backend) is None


def test_audit_replaces_a_wrong_cached_record(run_backend):
    case = find_case("k33-is-not-planar")
    digest = case_hash(case)
    wrong = RunRecord(command="repro:k33-is-not-planar", config_hash=digest, verdict=Verdict.PASS, wall_time=0.0)
    store_record(wrong, backend=run_backend)

    report = run_repro(ReproRunParams(case_ids=(case.id,), sample_percent=100), backend=run_backend)
    assert report.results[0].record.verdict is Verdict.FAIL
    assert report.status is Verdict.PASS
    assert load_record(digest, backend=run_backend).verdict is Verdict.FAIL


def test_unsampled_wrong_record_is_replayed(run_backend):
    case = find_case("triangle-is-planar")
    digest = case_hash(case)
    store_record(RunRecord(command="x", config_hash=digest, verdict=Verdict.FAIL, wall_time=0.0), backend=run_backend)
    report = run_repro(ReproRunParams(case_ids=(case.id,), sample_percent=0), backend=run_backend)
    assert report.results[0].cached
    assert report.exit_code is ExitCode.FAIL


def test_unknown_id_is_rejected(run_backend):
    with pytest.raises(UnknownCaseError):
        run_repro(ReproRunParams(case_ids=("triangle-is-planar", "nope")), backend=run_backend)


def test_group_runs_every_member(run_backend):
    report = run_repro(ReproRunParams(case_ids=("lem-transitive-3amalg",)), backend=run_backend)
    assert [r.case.id for r in report.results] == [
        "lem-transitive-3amalg-e", "lem-transitive-3amalg-lo", "lem-transitive-3amalg-po",
    ]
    assert all(r.record.verdict is Verdict.FAIL for r in report.results)
    assert report.status is Verdict.PASS


def test_report_does_not_depend_on_jobs(run_backend):
    ids = (*FAST, "lem-transitive-3amalg")
    inline = run_repro(ReproRunParams(case_ids=ids, jobs=1, use_cache=False), backend=run_backend)
    pooled = run_repro(ReproRunParams(case_ids=ids, jobs=4, use_cache=False), backend=run_backend)
    assert pooled.as_record() == inline.as_record()
    assert inline.status is Verdict.PASS


def test_run_logs_resources_and_seed(run_backend, monkeypatch):
    captured = structlog.testing.CapturingLogger()
    monkeypatch.setattr(repro, "log", captured)
    run_repro(ReproRunParams(case_ids=FAST[:1], audit_seed=11), backend=run_backend)

    events = {call.args[0]: call.kwargs for call in captured.calls if call.method_name == "info"}
    assert events["repro finished"]["audit_seed"] == 11
    assert events["repro finished"]["pass"] == 1
    assert events["repro resources"]["jobs_run"] >= 1
    assert set(events["repro resources"]["canonical_cache"]) == {"hits", "misses", "size"}


@pytest.mark.slow
def test_planar_amalgamation_case_passes(run_backend):
    report = run_repro(ReproRunParams(case_ids=("ex2.2-5-planar-k33",)), backend=run_backend)
    assert report.results[0].record.verdict is Verdict.FAIL
    assert report.status is Verdict.PASS


@pytest.mark.slow
def test_whole_catalog_passes(run_backend):
    report = run_repro(ReproRunParams(jobs=4), backend=run_backend)
    assert report.counts()["fail"] == 0
    assert report.status is Verdict.PASS
    assert report.exit_code is ExitCode.PASS


# ─── Cache keys ─────────────────────────────────────────────────────────────────


def test_hash_depends_on_the_limits():
    before = config_hash("check_class:ap", {"document": "builtin graphs"})
    with override_limits(current_limits().model_copy(update={"WITNESS_MAX_SIZE": 3})):
        after = config_hash("check_class:ap", {"document": "builtin graphs"})
    assert before != after


def test_audit_sample_is_deterministic_per_seed():
    digests = [f"{n:08x}" + "0" * 56 for n in range(2000)]
    sampled = [d for d in digests if in_audit_sample(d, 10, seed=7)]
    assert sampled == [d for d in digests if in_audit_sample(d, 10, seed=7)]
    assert sampled != [d for d in digests if in_audit_sample(d, 10, seed=8)]
    assert 140 < len(sampled) < 260
    assert not any(in_audit_sample(d, 0, seed=7) for d in digests)
    assert all(in_audit_sample(d, 100, seed=7) for d in digests)


def test_each_run_draws_its_own_audit_seed():
    seeds = {ReproRunParams().audit_seed for _ in range(8)}
    assert len(seeds) > 1
    assert ReproRunParams(audit_seed=5).audit_seed == 5


def test_reconcile_keeps_a_matching_hit(run_backend):
    cached, fresh = _record(Verdict.FAIL), _record(Verdict.FAIL).model_copy(update={"wall_time": 9.0})
    assert reconcile(cached, fresh, backend=run_backend) is cached
    assert load_record(cached.config_hash, backend=run_backend) is None
