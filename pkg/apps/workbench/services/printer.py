# apps/workbench/services/printer.py
# ================================================================================
"""Print signatures, structures and classes back into the DSL.

``parse_dsl(format_structure(s)) == s`` and ``parse_dsl(format_class(k)) == k``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from apps.classes.specs import ClassKind, ClassSpec
from apps.kernel.structures import Signature, Structure

if TYPE_CHECKING:
    from collections.abc import Mapping

    from apps.workbench.services.dsl import DslValue


def format_signature(sig: Signature) -> str:
    return "[" + ", ".join(f"{name}/{arity}" for name, arity in sig.symbols) + "]"


def format_tuple(t: tuple[int, ...]) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def format_structure(s: Structure) -> str:
    blocks = [
        f"{name}: {' '.join(format_tuple(t) for t in sorted(rel))}"
        for name, rel in s.items()
        if rel
    ]
    body = f" {'; '.join(blocks)} " if blocks else " "
    return f"struct {format_signature(s.sig)} {s.size} {{{body}}}"


def format_class(k: ClassSpec) -> str:
    match k.kind:
        case ClassKind.BUILTIN:
            return f"builtin {k.builtin}({k.param})" if k.param is not None else f"builtin {k.builtin}"
        case ClassKind.FORBIDDEN:
            patterns = ", ".join(format_structure(p) for p in k.forbidden)
            return f"forbidden {{ {patterns} }} over {format_signature(k.sig)}"
        case _:
            left, right = k.factors
            return f"{k.kind}({format_class(left)}, {format_class(right)})"


def format_value(value: DslValue) -> str:
    if isinstance(value, Signature):
        return format_signature(value)
    if isinstance(value, Structure):
        return format_structure(value)
    return format_class(value)


def format_document(bindings: Mapping[str, DslValue]) -> str:
    """One binding per line, in insertion order."""
    keyword = {Signature: "sig", Structure: "structure", ClassSpec: "class"}
    return "\n".join(f"{keyword[type(v)]} {name} = {format_value(v)}" for name, v in bindings.items()) + "\n"
