# apps/workbench/management/commands/dss.py
# ================================================================================
"""
Definable self-similarity: class-level sweeps and single instances.

    python manage.py dss check "builtin graphs" --size 2 --host 5
    python manage.py dss instance inst.wb --f 0 --base 0 --pivot 1 --g 1

An instance document binds the class ``K`` and the structures ``A``, ``B``
and ``C``.  ``--construct`` builds the witness from disjoint 3-amalgamation
instead of searching; ``--transfer`` builds it through the factors of a free
superposition.
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandParser

from apps.workbench.conf import ExitCode
from apps.workbench.services.commands import WorkbenchCommand, int_list, read_text
from apps.workbench.services.dsl import DslDocument, parse_class, parse_document


class Command(WorkbenchCommand):
    help = "Checks definable self-similarity of a class or of one instance."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mode", choices=("check", "instance"))
        parser.add_argument("source", help="check: a class expression; instance: a document binding K, A, B, C.")
        parser.add_argument("--size", type=int, default=2)
        parser.add_argument("--host", type=int, default=None)
        parser.add_argument("--all-extensions", action="store_true", dest="all_extensions",
                            help="Sweep every extension, not only one-point ones.")
        parser.add_argument("--f", type=int_list, default=(), help="f : A → B as a comma list.")
        parser.add_argument("--g", type=int_list, default=(), help="g : A → C as a comma list.")
        parser.add_argument("--base", type=int_list, default=(), help="Base elements of C.")
        parser.add_argument("--pivot", type=int, default=0)
        parser.add_argument("--disjoint", action="store_true")
        parser.add_argument("--construct", action="store_true", help="Build the witness from 3-amalgams.")
        parser.add_argument("--transfer", action="store_true", help="Build the witness through the factors.")

    def run(self, **options: Any) -> ExitCode:
        text = read_text(options["source"])
        if options["mode"] == "check":
            params = {"size": options["size"], "host": options["host"], "one_point": not options["all_extensions"]}
            return self.run_op("check", "check_dss", DslDocument({"K": parse_class(text)}), params, text)

        params = {"f": options["f"], "base": options["base"], "pivot": options["pivot"], "g": options["g"]}
        if options["construct"]:
            op = "dss_from_3amalg"
        elif options["transfer"]:
            op = "super_dss_transfer"
        else:
            op = "dss_instance"
            params |= {"host": options["host"], "disjoint": options["disjoint"]}
        return self.run_op("instance", op, parse_document(text), params, text)
