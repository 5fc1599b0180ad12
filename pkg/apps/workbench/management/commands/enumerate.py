# apps/workbench/management/commands/enumerate.py
# ================================================================================
"""
Lists the members of a class up to isomorphism.

    python manage.py enumerate "builtin graphs" --size 3
    python manage.py enumerate "builtin forests" --size 5 --upto --count
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandParser

from apps.classes.services.enumeration import enumerate_members
from apps.workbench.conf import ExitCode
from apps.workbench.services.commands import WorkbenchCommand, read_class
from apps.workbench.services.printer import format_structure


class Command(WorkbenchCommand):
    help = "Enumerates one representative per isomorphism type of a class."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("klass", metavar="CLASS", help="A class expression or a file holding one.")
        parser.add_argument("--size", type=int, required=True)
        parser.add_argument("--upto", action="store_true", help="Every size from 0 to --size.")
        parser.add_argument("--count", action="store_true", help="Print the number of members per size only.")

    def run(self, **options: Any) -> ExitCode:
        k = read_class(options["klass"])
        sizes = range(options["size"] + 1) if options["upto"] else (options["size"],)
        members = {n: enumerate_members(k, n) for n in sizes}

        if options["count"]:
            counts = {n: len(found) for n, found in members.items()}
            self.write_value("\n".join(f"{n}: {c}" for n, c in counts.items()), counts)
            return ExitCode.PASS

        structures = [s for found in members.values() for s in found]
        self.write_value(
            "\n".join(format_structure(s) for s in structures),
            [s.as_record() for s in structures],
        )
        return ExitCode.PASS
