# apps/workbench/services/codec.py
# ================================================================================
"""JSON records for structures and configuration witnesses.

Records are the ``as_record()`` shapes; formulas travel in prefix notation.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

import orjson

from apps.amalgamation.datatype import AmalgInstance, Amalgam, PSystem, Unresolved
from apps.amalgamation.services.systems import colimit_base
from apps.classes.datatype import Membership
from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation, Violation
from apps.kernel.exceptions import WorkbenchError
from apps.kernel.structures import Embedding, Signature, Structure
from apps.partition.datatype import Coloring, DssInstance, DssWitness, PatternOutcome, ProductWitness
from apps.products.datatype import (
    FullDecomposition,
    Inconclusive,
    LexAssembly,
    ProductStructure,
    Rejection,
    SuperDecomposition,
)
from apps.workbench.exceptions import DslError
from apps.workbench.services.dsl import parse_formula

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

_DUMPS_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_NON_STR_KEYS


def dumps(record: Any) -> bytes:
    return orjson.dumps(record, option=_DUMPS_OPTIONS, default=_default)


def _default(obj: Any) -> Any:
    if hasattr(obj, "as_record"):
        return obj.as_record()
    if isinstance(obj, frozenset | set):
        return sorted(obj)
    raise TypeError


def witness_record(obj: Any) -> Any:
    """JSON-ready view of any witness a check can return."""
    match obj:
        case None | bool() | int() | float() | str():
            return obj
        case Structure() | ConfigWitness():
            return obj.as_record()
        case Embedding():
            return list(obj.map)
        case AmalgInstance(a=a, b0=b0, b1=b1, f0=f0, f1=f1):
            return {"a": a.as_record(), "b0": b0.as_record(), "b1": b1.as_record(), "f0": list(f0.map),
                    "f1": list(f1.map)}
        case Amalgam(c=c, g0=g0, g1=g1):
            return {"c": c.as_record(), "g0": list(g0.map), "g1": list(g1.map)}
        case PSystem():
            col = colimit_base(obj)
            return {"n": obj.n, "colimit": col.structure.as_record(), "origin": [sorted(p) for p in col.origin]}
        case DssInstance():
            return {"a": obj.a.as_record(), "b": obj.b.as_record(), "c": obj.c.as_record(), "f": list(obj.f.map),
                    "base": sorted(obj.base), "pivot": obj.pivot, "g": list(obj.g.map)}
        case DssWitness(d=d, j=j, h=h):
            return {"d": d.as_record(), "j": list(j.map), "h": list(h.map)}
        case Coloring(k=k, assignment=assignment):
            return {"colors": k, "assignment": list(assignment)}
        case ProductWitness(structure=s, left=left, right=right, colors=colors):
            return {"structure": s.as_record(), "left": left.as_record(), "right": right.as_record(),
                    "colors": list(colors)}
        case PatternOutcome(pattern=p, witness=w):
            return {"pattern": p.as_record(), "witness": witness_record(w)}
        case LexAssembly(base=base, fibers=fibers):
            return {"base": base.as_record(), "fibers": [f.as_record() for f in fibers]}
        case SuperDecomposition(left=left, right=right):
            return {"left": left.as_record(), "right": right.as_record()}
        case ProductStructure(structure=s, points=points):
            return {"structure": s.as_record(), "points": [list(p) for p in points]}
        case FullDecomposition(q0=q0, q1=q1, coordinates=coordinates):
            return {"q0": q0.as_record(), "q1": q1.as_record(), "coordinates": [list(c) for c in coordinates]}
        case Unresolved(reason=reason) | Rejection(reason=reason) | Inconclusive(reason=reason):
            return {"reason": reason}
        case Membership(member=member, reason=reason, witness=w):
            return {"member": member, "reason": reason, "witness": witness_record(w)}
        case Violation():
            return {"entry": obj.entry, "symbol": obj.symbol, "tuple": list(obj.tup), "expected": obj.expected}
        case list() | tuple():
            return [witness_record(x) for x in obj]
        case dict():
            return {str(k): witness_record(v) for k, v in obj.items()}
    return repr(obj)


def _signature(pairs: Any) -> Signature:
    return Signature.of(*(tuple(p) for p in pairs))


def interpretation_from_record(record: Mapping[str, Any]) -> Interpretation:
    try:
        formulas = {name: parse_formula(text) for name, text in record["formulas"].items()}
        return Interpretation.of(_signature(record["source"]), _signature(record["target"]), record["width"], formulas)
    except DslError:
        raise
    except (KeyError, TypeError, AttributeError, WorkbenchError) as exc:
        msg = f"malformed interpretation record: {exc}"
        raise DslError(msg) from exc


def witness_from_record(record: Mapping[str, Any]) -> ConfigWitness:
    interp = interpretation_from_record(record.get("interpretation") or {})
    try:
        entries = tuple(
            ConfigEntry.of(Structure.from_record(e["index"]), Structure.from_record(e["target"]), e["blocks"])
            for e in record.get("entries", ())
        )
        return ConfigWitness(interp, entries)
    except (KeyError, TypeError, WorkbenchError) as exc:
        msg = f"malformed witness record: {exc}"
        raise DslError(msg) from exc


def load_witness(path: Path) -> ConfigWitness:
    try:
        record = orjson.loads(path.read_bytes())
    except (OSError, orjson.JSONDecodeError) as exc:
        msg = f"cannot read a witness from {path}: {exc}"
        raise DslError(msg) from exc
    return witness_from_record(record)
