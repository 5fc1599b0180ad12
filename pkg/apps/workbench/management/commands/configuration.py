# apps/workbench/management/commands/configuration.py
# ================================================================================
"""
Builds, composes and transfers configuration witnesses, then verifies them.

    python manage.py configuration build dg_to_g --max-size 3 --output dg.json
    python manage.py configuration compose dg_to_g g_to_po --max-size 3
    python manage.py configuration injective dg.json
    python manage.py configuration transfer lex left.json right.json "lex(builtin sets, builtin sets)"
    python manage.py configuration verify dg.json

Witness files are the JSON records written by ``--output``.  The verdict is
the verification of the resulting witness.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any

from django.core.management.base import CommandError, CommandParser
from pydantic import ValidationError

from apps.configurations.conf import BUILTIN_CONFIGURATIONS, ConfigBuildParams, TransferParams
from apps.configurations.services.builders import builtin_configuration, configuration_entries
from apps.configurations.services.calculus import compose_configurations, make_injective
from apps.configurations.services.transfers import (
    full_config_transfer,
    full_grids,
    lex_assemblies,
    lex_config_transfer,
    super_config_transfer,
    superpositions,
)
from apps.kernel.conf import current_limits
from apps.workbench.conf import ExitCode
from apps.workbench.services.codec import dumps, load_witness
from apps.workbench.services.commands import WorkbenchCommand, read_class
from apps.workbench.services.operations import verification_outcome

if TYPE_CHECKING:
    from apps.configurations.datatype import ConfigWitness


class Command(WorkbenchCommand):
    help = "Builds and verifies configuration witnesses."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mode", choices=("build", "compose", "injective", "transfer", "verify"))
        parser.add_argument(
            "inputs",
            nargs="+",
            help="build: NAME; compose: OUTER INNER; injective/verify: WITNESS; transfer: KIND W0 W1 CLASS.",
        )
        parser.add_argument("--max-size", type=int, default=3, dest="max_size")
        parser.add_argument("--output", type=Path, help="Write the witness as JSON to this file.")

    def run(self, **options: Any) -> ExitCode:
        w = self._witness(options["mode"], options["inputs"], options["max_size"])
        if (out := options.get("output")) is not None:
            out.write_bytes(dumps(w.as_record()))
        jobs = current_limits().JOBS
        record = self.cached(options["mode"], {"witness": w.as_record()}, lambda: verification_outcome(w, jobs))
        return self.report(record)

    def _witness(self, mode: str, inputs: list[str], max_size: int) -> ConfigWitness:
        expected = {"build": 1, "compose": 2, "injective": 1, "verify": 1, "transfer": 4}[mode]
        if len(inputs) != expected:
            msg = f"{mode} takes {expected} input(s), got {len(inputs)}"
            raise CommandError(msg, returncode=ExitCode.USAGE)

        try:
            match mode:
                case "build":
                    p = ConfigBuildParams(name=inputs[0], max_size=max_size)
                    return builtin_configuration(p.name, p.max_size)
                case "compose":
                    p, q = (ConfigBuildParams(name=n, max_size=max_size) for n in inputs)
                    outer = builtin_configuration(p.name, p.max_size)
                    inner = configuration_entries(q.name, [e.target for e in outer.entries])
                    return compose_configurations(outer, inner)
                case "injective":
                    return make_injective(load_witness(Path(inputs[0])))
                case "verify":
                    return load_witness(Path(inputs[0]))
        except ValidationError as exc:
            builtins = ", ".join(BUILTIN_CONFIGURATIONS)
            msg = f"bad configuration parameters (builtins: {builtins}): {exc.errors(include_url=False)}"
            raise CommandError(msg, returncode=ExitCode.USAGE) from None
        return self._transfer(inputs, max_size)

    def _transfer(self, inputs: list[str], max_size: int) -> ConfigWitness:
        try:
            p = TransferParams(kind=inputs[0], max_size=max_size)
        except ValidationError as exc:
            msg = f"bad transfer parameters: {exc.errors(include_url=False)}"
            raise CommandError(msg, returncode=ExitCode.USAGE) from None
        w0, w1 = load_witness(Path(inputs[1])), load_witness(Path(inputs[2]))
        k = read_class(inputs[3])
        if k.kind != p.kind:
            msg = f"a {p.kind} transfer needs a {p.kind} class, got {k.describe()}"
            raise CommandError(msg, returncode=ExitCode.USAGE)
        match p.kind:
            case "lex":
                return lex_config_transfer(w0, w1, lex_assemblies(k, p.max_size))
            case "full":
                return full_config_transfer(w0, w1, full_grids(*k.factors, p.max_size))
            case _:
                return super_config_transfer(w0, w1, superpositions(*k.factors, p.max_size))
