# apps/workbench/management/commands/export_dot.py
# ================================================================================
"""
Writes a structure as a Graphviz DOT graph.

    python manage.py export_dot "struct [E/2] 3 { E: (0,1) (1,0) }" --name pair > pair.dot
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandParser

from apps.workbench.conf import DOT_GRAPH_NAME, ExitCode
from apps.workbench.services.commands import WorkbenchCommand, read_structure
from apps.workbench.services.dot import export_dot


class Command(WorkbenchCommand):
    help = "Exports a structure to DOT."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("structure", help="A structure literal or a file holding one.")
        parser.add_argument("--name", default=DOT_GRAPH_NAME, help="Graph name.")

    def run(self, **options: Any) -> ExitCode:
        self.stdout.write(export_dot(read_structure(options["structure"]), name=options["name"]), ending="")
        return ExitCode.PASS
