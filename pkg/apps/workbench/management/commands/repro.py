# apps/workbench/management/commands/repro.py
# ================================================================================
"""
Runs the repro catalog and reports each case against its expected verdict.

    python manage.py repro
    python manage.py repro ex2.2-5-planar-k33 lem-transitive-3amalg --jobs 4
    python manage.py repro all --format json --no-cache

Exit code: 0 when every case matches, 1 on any mismatch, 2 when the only
misses are inconclusive.
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser
from pydantic import ValidationError

from apps.kernel.conf import current_limits
from apps.kernel.datatype import Verdict
from apps.workbench.conf import ExitCode, OutputFormat, ReproRunParams
from apps.workbench.exceptions import UnknownCaseError
from apps.workbench.services.codec import dumps
from apps.workbench.services.commands import WorkbenchCommand
from apps.workbench.services.repro import ReproReport, run_repro


class Command(WorkbenchCommand):
    help = "Runs catalog cases (all by default) and compares verdicts with the expected ones."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("case_ids", nargs="*", metavar="ID", help="Case ids, or 'all'.")
        parser.add_argument(
            "--sample-percent",
            type=int,
            dest="sample_percent",
            help="Share of cache hits recomputed as an audit (default from the limits).",
        )
        parser.add_argument(
            "--audit-seed", type=int, dest="audit_seed", help="Seed choosing the audited hits (random by default).",
        )

    def run(self, **options: Any) -> ExitCode:
        limits = current_limits()
        sample = options.get("sample_percent")
        seed = options.get("audit_seed")
        try:
            params = ReproRunParams(
                case_ids=tuple(options["case_ids"]),
                jobs=limits.JOBS,
                use_cache=self.use_cache,
                sample_percent=limits.CACHE_SAMPLE_PERCENT if sample is None else sample,
                **({"audit_seed": seed} if seed is not None else {}),
            )
        except ValidationError as exc:
            msg = f"bad repro options: {exc.errors(include_url=False)}"
            raise CommandError(msg, returncode=ExitCode.USAGE) from None

        try:
            report = run_repro(params, backend=self.backend)
        except UnknownCaseError as exc:
            raise CommandError(str(exc), returncode=ExitCode.USAGE) from exc

        if self.output_format is OutputFormat.JSON:
            self.stdout.write(dumps(report.as_record()).decode())
        else:
            self._pretty_report(report)
        return report.exit_code

    def _pretty_report(self, report: ReproReport) -> None:
        style = self.style
        paint = {Verdict.PASS: style.SUCCESS, Verdict.FAIL: style.ERROR, Verdict.INCONCLUSIVE: style.WARNING}
        width = max((len(r.case.id) for r in report.results), default=2)

        self.stdout.write(style.MIGRATE_HEADING(f"{'case':<{width}}  expected      observed      status"))
        for r in report.results:
            status = paint[r.status](f"{r.status!s:<12}")
            self.stdout.write(
                f"{r.case.id:<{width}}  {r.case.expected!s:<12}  {r.record.verdict!s:<12}  {status}"
            )
            if r.status is not Verdict.PASS and r.record.detail:
                self.stdout.write(f"{'':<{width}}  {r.record.detail}  [{r.case.anchor}]")

        counts = ", ".join(f"{n} {v}" for v, n in report.counts().items())
        self.stdout.write(paint[report.status](f"{len(report.results)} cases: {counts}"))
