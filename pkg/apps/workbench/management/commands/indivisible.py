# apps/workbench/management/commands/indivisible.py
# ================================================================================
"""
Indivisibility: verify a witness, search for the smallest one, build one
for a product class, or run the free-superposition experiment.

    python manage.py indivisible verify "builtin graphs" K2.wb K3.wb --colors 2
    python manage.py indivisible search "builtin graphs" K2.wb --max-size 4
    python manage.py indivisible lex "lex(builtin sets, builtin sets)" A.wb
    python manage.py indivisible super-search "builtin graphs" "builtin linear_orders" --max-pattern 2
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser

from apps.workbench.conf import ExitCode
from apps.workbench.services.commands import WorkbenchCommand, read_text
from apps.workbench.services.dsl import DslDocument, parse_class, parse_structure

MODES = ("verify", "search", "lex", "full", "super-search")


class Command(WorkbenchCommand):
    help = "Verifies, searches or builds indivisibility witnesses."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mode", choices=MODES)
        parser.add_argument("klass", metavar="CLASS", help="Class expression, or a file holding one.")
        parser.add_argument(
            "inputs", nargs="*",
            help="verify: PATTERN WITNESS; search, lex, full: PATTERN; super-search: the right-hand CLASS.",
        )
        parser.add_argument("--colors", type=int, default=2)
        parser.add_argument("--max-size", type=int, default=6, dest="max_size")
        parser.add_argument("--max-pattern", type=int, default=1, dest="max_pattern")

    def run(self, **options: Any) -> ExitCode:
        mode, inputs = options["mode"], options["inputs"]
        expected = {"verify": 2, "search": 1, "lex": 1, "full": 1, "super-search": 1}[mode]
        if len(inputs) != expected:
            msg = f"indivisible {mode} takes {expected} input(s) after the class, got {len(inputs)}"
            raise CommandError(msg, returncode=ExitCode.USAGE)

        texts = [read_text(options["klass"]), *map(read_text, inputs)]
        bindings: dict[str, Any] = {"K": parse_class(texts[0])}
        colors = {"colors": options["colors"]}
        match mode:
            case "verify":
                bindings |= {"A": parse_structure(texts[1]), "B": parse_structure(texts[2])}
                op, params = "indivisibility_verify", colors
            case "search":
                bindings["A"] = parse_structure(texts[1])
                op, params = "indivisibility_search", {**colors, "max_size": options["max_size"]}
            case "lex" | "full":
                bindings["A"] = parse_structure(texts[1])
                op, params = f"{mode}_witness", colors
            case _:
                bindings["L"] = parse_class(texts[1])
                op = "super_indivisibility"
                params = {**colors, "max_size": options["max_size"], "max_pattern": options["max_pattern"]}
        return self.run_op(mode, op, DslDocument(bindings), params, "\n".join(texts))
