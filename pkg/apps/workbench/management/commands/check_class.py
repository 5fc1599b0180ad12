# apps/workbench/management/commands/check_class.py
# ================================================================================
"""
Class-level property checks: amalgamation, strong amalgamation, joint
embedding, heredity and disjoint n-amalgamation.

    python manage.py check_class ap "builtin forests" --base 3 --host 6
    python manage.py check_class namalg "builtin linear_orders" --n 3 --base 2
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandParser

from apps.workbench.conf import ExitCode
from apps.workbench.services.commands import WorkbenchCommand, read_text
from apps.workbench.services.dsl import DslDocument, parse_class

MODES = ("ap", "sap", "jep", "hp", "namalg")


class Command(WorkbenchCommand):
    help = "Checks AP, SAP, JEP, HP or disjoint n-amalgamation of a class up to size bounds."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mode", choices=MODES)
        parser.add_argument("klass", metavar="CLASS", help="Class expression, or a file holding one.")
        parser.add_argument("--base", type=int, default=2, help="Largest member size in the instances.")
        parser.add_argument("--host", type=int, default=6, help="Largest amalgam size searched.")
        parser.add_argument("--size", type=int, default=4, help="Largest member size for hp.")
        parser.add_argument("--n", type=int, default=3, help="Arity of the amalgamation systems for namalg.")
        parser.add_argument("--pad", type=int, default=0, help="Extra elements allowed in n-amalgams.")

    def run(self, **options: Any) -> ExitCode:
        mode = options["mode"]
        text = read_text(options["klass"])
        doc = DslDocument({"K": parse_class(text)})
        match mode:
            case "ap" | "sap":
                op = "check_ap"
                params = {"base": options["base"], "host": options["host"], "strong": mode == "sap"}
            case "jep":
                op, params = "check_jep", {"base": options["base"], "host": options["host"]}
            case "hp":
                op, params = "check_hp", {"size": options["size"]}
            case _:
                op, params = "disjoint_n", {"n": options["n"], "base": options["base"], "pad": options["pad"]}
        return self.run_op(mode, op, doc, params, text)
