# apps/workbench/management/commands/product.py
# ================================================================================
"""
Builds, decomposes and compares product structures.

    python manage.py product lex "struct [] 2 { }" "struct [E/2] 2 { E: (0,1) (1,0) }"
    python manage.py product super A.wb B.wb --aligner 1,0
    python manage.py product decompose "full(builtin sets, builtin sets)" S.wb --bound 4
    python manage.py product age A.wb B.wb --mode full --size 3

``lex``, ``full`` and ``super`` print the product; ``decompose`` splits a
structure over a product class; ``age`` and ``aut`` check the product
identities for two factors.
"""

from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser

from apps.products.services.assembly import full_product, lex_product, superpose
from apps.workbench.conf import ExitCode
from apps.workbench.services.commands import WorkbenchCommand, int_list, read_class, read_structure, read_text
from apps.workbench.services.dsl import DslDocument
from apps.workbench.services.printer import format_structure

_BUILDERS = {"lex": lex_product, "full": full_product}


class Command(WorkbenchCommand):
    help = "Builds lexicographic, full and superposed products and checks their identities."

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mode", choices=("lex", "full", "super", "decompose", "age", "aut"))
        parser.add_argument("first", help="A structure; for decompose, the product class.")
        parser.add_argument("second", help="A structure.")
        parser.add_argument("--aligner", type=int_list, default=None,
                            help="super: image of each element of the first structure, as a comma list.")
        parser.add_argument("--bound", type=int, default=4, help="decompose: host search bound for full products.")
        parser.add_argument("--mode", dest="age_mode", choices=("lex", "full"), default="lex")
        parser.add_argument("--size", type=int, default=3, help="age: largest substructure size compared.")

    def run(self, **options: Any) -> ExitCode:
        mode = options["mode"]
        first, second = read_text(options["first"]), read_text(options["second"])
        text = f"{first}\n{second}"

        if mode == "decompose":
            doc = DslDocument({"K": read_class(first), "S": read_structure(second)})
            return self.run_op(mode, "decompose", doc, {"bound": options["bound"]}, text)

        a, b = read_structure(first), read_structure(second)
        if mode == "age":
            doc = DslDocument({"A": a, "B": b})
            return self.run_op(mode, "age_identity", doc, {"mode": options["age_mode"], "size": options["size"]}, text)
        if mode == "aut":
            return self.run_op(mode, "aut_identity", DslDocument({"A": a, "B": b}), {}, text)

        if mode == "super":
            aligner = options["aligner"]
            if aligner is not None and len(aligner) != a.size:
                msg = f"--aligner needs {a.size} entries, got {len(aligner)}"
                raise CommandError(msg, returncode=ExitCode.USAGE)
            product = superpose(a, b, aligner)
        else:
            product = _BUILDERS[mode](a, b)
        self.write_value(format_structure(product.structure), product.structure.as_record())
        return ExitCode.PASS
