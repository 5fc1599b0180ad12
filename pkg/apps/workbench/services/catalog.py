# apps/workbench/services/catalog.py
# ================================================================================
"""Loading and lookup of the repro catalog."""

from __future__ import annotations

from functools import cache
from pathlib import Path

import structlog
import yaml
from pydantic import ValidationError

from apps.workbench.conf import CATALOG_DIR, CATALOG_GLOB
from apps.workbench.exceptions import CatalogError, DslError, UnknownCaseError
from apps.workbench.schemas.catalog import ReproCase
from apps.workbench.services.dsl import parse_document
from apps.workbench.services.operations import OPERATIONS

log = structlog.get_logger(__name__).bind(component="Catalog")


def _read_file(path: Path) -> list[ReproCase]:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except (OSError, yaml.YAMLError) as exc:
        msg = f"{path.name}: cannot read catalog file: {exc}"
        raise CatalogError(msg) from exc
    if not isinstance(data, dict) or not isinstance(data.get("cases"), list):
        msg = f"{path.name}: expected a mapping with a 'cases' list"
        raise CatalogError(msg)

    cases = []
    for n, raw in enumerate(data["cases"]):
        try:
            case = ReproCase.model_validate(raw)
        except ValidationError as exc:
            msg = f"{path.name}: case #{n}: {exc.errors(include_url=False)}"
            raise CatalogError(msg) from None
        if case.operation not in OPERATIONS:
            msg = f"{path.name}: case {case.id!r} names an unknown operation {case.operation!r}"
            raise CatalogError(msg)
        cases.append(case)
    return cases


@cache
def load_catalog(directory: Path = CATALOG_DIR) -> tuple[ReproCase, ...]:
    """Every case under ``directory``, sorted by id.  Documents are parsed once here so typos fail early."""
    seen: dict[str, Path] = {}
    cases: list[ReproCase] = []
    for path in sorted(directory.glob(CATALOG_GLOB)):
        for case in _read_file(path):
            if case.id in seen:
                msg = f"duplicate case id {case.id!r} in {path.name} and {seen[case.id].name}"
                raise CatalogError(msg)
            seen[case.id] = path
            try:
                parse_document(case.document)
            except DslError as exc:
                msg = f"{path.name}: case {case.id!r}: {exc}"
                raise CatalogError(msg) from exc
            cases.append(case)
    if clashes := {c.group for c in cases} & seen.keys():
        msg = f"group names {sorted(clashes)} are also case ids"
        raise CatalogError(msg)
    log.debug("catalog loaded", directory=str(directory), cases=len(cases))
    return tuple(sorted(cases, key=lambda c: c.id))


def find_case(case_id: str, catalog: tuple[ReproCase, ...] | None = None) -> ReproCase:
    for case in catalog if catalog is not None else load_catalog():
        if case.id == case_id:
            return case
    msg = f"no catalog case with id {case_id!r}"
    raise UnknownCaseError(msg)


def find_cases(name: str, catalog: tuple[ReproCase, ...] | None = None) -> tuple[ReproCase, ...]:
    """The case called ``name``, or every case of the group called ``name``."""
    catalog = catalog if catalog is not None else load_catalog()
    if members := tuple(c for c in catalog if c.group == name):
        return members
    return (find_case(name, catalog),)
