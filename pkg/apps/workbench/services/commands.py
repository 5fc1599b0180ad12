# apps/workbench/services/commands.py
# ================================================================================
"""
Base class and helpers shared by every workbench management command.

Global options: ``--config`` (YAML file of ``WorkbenchLimits`` overrides),
``--jobs``, ``--time-limit``, ``--cache-dir``, ``--no-cache`` and
``--format dsl|json``.  Flags override the file; the file overrides the
environment.  Library errors end the command with exit code 3; verdicts map
to 0 (pass), 1 (fail) and 2 (inconclusive).
"""

from __future__ import annotations

import sys
import time
from pathlib import Path
from typing import TYPE_CHECKING, Any

import structlog
import yaml
from django.core.management.base import BaseCommand, CommandError, CommandParser
from pydantic import ValidationError

from apps.kernel.conf import current_limits, deadline, override_limits
from apps.kernel.datatype import Verdict
from apps.kernel.exceptions import TimeLimitExceededError, WorkbenchError
from apps.kernel.structures import Structure
from apps.workbench.conf import ExitCode, OutputFormat
from apps.workbench.schemas.records import RunRecord
from apps.workbench.services.codec import dumps
from apps.workbench.services.dsl import DslDocument, parse_class, parse_structure
from apps.workbench.services.operations import Outcome, run_operation
from apps.workbench.services.printer import format_structure
from apps.workbench.services.repro import exit_code_for
from apps.workbench.services.runs import config_hash, load_record, run_cache, store_record

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from apps.classes.specs import ClassSpec
    from config.settings.base import WorkbenchLimits

log = structlog.get_logger(__name__).bind(component="Commands")


# ─── Inputs ─────────────────────────────────────────────────────────────────────


def read_text(arg: str) -> str:
    """``arg`` itself, or the contents of the file it names."""
    path = Path(arg)
    if len(arg) < 256 and "\n" not in arg and path.is_file():
        return path.read_text(encoding="utf-8")
    return arg


def read_structure(arg: str) -> Structure:
    return parse_structure(read_text(arg))


def read_class(arg: str) -> ClassSpec:
    return parse_class(read_text(arg))


def int_list(text: str) -> tuple[int, ...]:
    """``"0,1,2"`` → ``(0, 1, 2)``; the empty string is the empty tuple."""
    return tuple(int(x) for x in text.split(",") if x.strip())


def load_limits(config: Path | None, overrides: Mapping[str, Any]) -> WorkbenchLimits:
    values = current_limits().model_dump()
    if config is not None:
        try:
            loaded = yaml.safe_load(config.read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            msg = f"cannot read config file {config}: {exc}"
            raise CommandError(msg, returncode=ExitCode.USAGE) from exc
        if not isinstance(loaded, dict):
            msg = f"config file {config} must hold a mapping of limit names"
            raise CommandError(msg, returncode=ExitCode.USAGE)
        values.update({str(k).upper(): v for k, v in loaded.items()})
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return type(current_limits()).model_validate(values)
    except ValidationError as exc:
        msg = f"invalid limits: {exc.errors(include_url=False)}"
        raise CommandError(msg, returncode=ExitCode.USAGE) from None


# ─── Output ─────────────────────────────────────────────────────────────────────


def _is_structure_record(obj: Any) -> bool:
    return isinstance(obj, dict) and {"signature", "size", "relations"} <= obj.keys()


def render_dsl(obj: Any, indent: int = 0) -> list[str]:
    """Indented text view of a witness record; structures are printed in the DSL."""
    pad = "  " * indent
    if _is_structure_record(obj):
        return [pad + format_structure(Structure.from_record(obj))]
    if isinstance(obj, dict):
        lines = []
        for key, value in obj.items():
            if isinstance(value, dict | list) and value and not all(isinstance(v, int) for v in value):
                lines.append(f"{pad}{key}:")
                lines.extend(render_dsl(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
        return lines
    if isinstance(obj, list):
        return [line for item in obj for line in render_dsl(item, indent)]
    return [f"{pad}{obj}"]


# ─── Command base ───────────────────────────────────────────────────────────────


class WorkbenchCommand(BaseCommand):
    """Adds the global options and runs ``run`` under the requested limits."""

    requires_system_checks: list[str] = []  # noqa: RUF012

    def add_arguments(self, parser: CommandParser) -> None:
        self.add_command_arguments(parser)
        parser.add_argument("--config", type=Path, help="YAML file of limit overrides.")
        parser.add_argument("--jobs", type=int, help="Worker processes for independent checks.")
        parser.add_argument("--time-limit", type=float, dest="time_limit", help="Per-job time limit in seconds.")
        parser.add_argument("--cache-dir", type=Path, dest="cache_dir", help="Directory of the run cache.")
        parser.add_argument("--no-cache", action="store_true", dest="no_cache", help="Neither read nor write the cache.")
        parser.add_argument(
            "--format",
            choices=[f.value for f in OutputFormat],
            default=OutputFormat.DSL.value,
            help="Output as DSL text or JSON.",
        )

    def add_command_arguments(self, parser: CommandParser) -> None:
        """Command-specific arguments."""

    def handle(self, *args: Any, **options: Any) -> None:
        flags = {"JOBS": options.get("jobs"), "TIME_LIMIT_S": options.get("time_limit")}
        limits = load_limits(options.get("config"), flags)
        self.output_format = OutputFormat(options.get("format") or OutputFormat.DSL)
        self.backend = run_cache(options.get("cache_dir"))
        self.use_cache = not options.get("no_cache")
        try:
            with override_limits(limits):
                code = self.run(**options)
        except CommandError:
            raise
        except (WorkbenchError, ValueError) as exc:
            log.warning("command rejected", command=self.command_name, error=str(exc))
            raise CommandError(str(exc), returncode=ExitCode.USAGE) from exc
        if code is not ExitCode.PASS:
            sys.exit(int(code))

    @property
    def command_name(self) -> str:
        return type(self).__module__.rsplit(".", 1)[-1]

    def run(self, **options: Any) -> ExitCode:
        raise NotImplementedError

    # -- verdicts ----------------------------------------------------------------------
    def cached(self, mode: str, inputs: Mapping[str, Any], compute: Callable[[], Outcome]) -> RunRecord:
        """``compute`` through the run cache, keyed by command, mode, inputs and limits."""
        command = f"{self.command_name}:{mode}"
        digest = config_hash(command, inputs)
        if self.use_cache and (hit := load_record(digest, backend=self.backend)) is not None:
            log.debug("run replayed", command=command)
            return hit
        t0 = time.perf_counter()
        try:
            with deadline(current_limits().TIME_LIMIT_S):
                outcome = compute()
        except TimeLimitExceededError as exc:
            log.warning("run timed out", command=command, error=str(exc))
            return RunRecord(
                command=command, config_hash=digest, verdict=Verdict.INCONCLUSIVE, detail=str(exc),
                wall_time=round(time.perf_counter() - t0, 3),
            )
        record = RunRecord(
            command=command,
            config_hash=digest,
            verdict=outcome.verdict,
            detail=outcome.detail,
            witnesses=[] if outcome.witness is None else [outcome.witness],
            wall_time=round(time.perf_counter() - t0, 3),
        )
        if self.use_cache:
            store_record(record, backend=self.backend)
        return record

    def run_op(self, mode: str, operation: str, doc: DslDocument, params: Mapping[str, Any], text: str) -> ExitCode:
        """Runs a registered operation through the cache and reports its verdict."""
        jobs = current_limits().JOBS
        record = self.cached(
            mode,
            {"operation": operation, "document": text, "params": dict(params)},
            lambda: run_operation(operation, doc, params, jobs=jobs),
        )
        return self.report(record)

    def report(self, record: RunRecord) -> ExitCode:
        if self.output_format is OutputFormat.JSON:
            self.stdout.write(dumps(record.model_dump(mode="json", exclude={"wall_time"})).decode())
        else:
            self._pretty_print(record)
        return exit_code_for(record.verdict)

    def _pretty_print(self, record: RunRecord) -> None:
        style = self.style
        paint = {Verdict.PASS: style.SUCCESS, Verdict.FAIL: style.ERROR, Verdict.INCONCLUSIVE: style.WARNING}
        self.stdout.write(style.MIGRATE_HEADING(record.command))
        self.stdout.write(f"  verdict : {paint[record.verdict](str(record.verdict))}")
        if record.detail:
            self.stdout.write(f"  detail  : {record.detail}")
        for line in render_dsl(record.witnesses, 2):
            self.stdout.write(line)

    def write_value(self, text_dsl: str, record: Any) -> None:
        """Prints a value (not a verdict) in the requested format."""
        if self.output_format is OutputFormat.JSON:
            self.stdout.write(dumps(record).decode())
        else:
            self.stdout.write(text_dsl)
