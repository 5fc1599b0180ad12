import pytest

from apps.classes.specs import ClassSpec
from apps.kernel.structures import Structure
from apps.workbench.exceptions import CatalogError, UnknownCaseError
from apps.workbench.schemas.catalog import Provenance
from apps.workbench.services.catalog import find_case, find_cases, load_catalog
from apps.workbench.services.dsl import parse_document
from apps.workbench.services.operations import OPERATIONS
from apps.workbench.services.printer import format_document

CATALOG = load_catalog()


def _write(tmp_path, text):
    (tmp_path / "cases.yaml").write_text(text, encoding="utf-8")
    return tmp_path


def test_catalog_is_sorted_and_unique():
    ids = [c.id for c in CATALOG]
    assert ids == sorted(ids)
    assert len(ids) == len(set(ids))


def test_every_case_names_a_registered_operation():
    assert {c.operation for c in CATALOG} <= OPERATIONS.keys()


@pytest.mark.parametrize("case_id", [
    "ex2.2-5-planar-k33",
    "ex2.2-6-forest-five-cycle",
    "lem-transitive-3amalg-lo",
    "lem-transitive-3amalg-e",
    "lem-transitive-3amalg-po",
    "ex-notdss-lex",
    "ex-notdss-full",
    "ex-direct2amalg-anti-diagonal",
    "ex-wreathdirectnamalg-lex",
    "ex-wreathdirectnamalg-full",
    "ex-jepless-union-no-jep",
    "ex-jepless-lex-not-indivisible",
    "ex-freefraisse-marks-no-jep",
    "lem-diagraphgraph-dg-to-g",
    "prop-pottdggg-g-to-po",
    "prop-pottdggg-g-to-t",
])
def test_published_examples_are_catalogued(case_id):
    assert find_case(case_id, CATALOG).provenance is Provenance.PUBLISHED


def test_published_anchors_name_a_label():
    labels = ("Example", "Lemma", "Proposition", "Theorem", "Definition", "Question")
    assert all(c.anchor.startswith(labels) for c in CATALOG if c.provenance is Provenance.PUBLISHED)


def test_group_names_select_their_cases():
    assert [c.id for c in find_cases("lem-transitive-3amalg", CATALOG)] == [
        "lem-transitive-3amalg-e", "lem-transitive-3amalg-lo", "lem-transitive-3amalg-po",
    ]
    assert find_cases("ex2.2-5-planar-k33", CATALOG) == (find_case("ex2.2-5-planar-k33", CATALOG),)
    with pytest.raises(UnknownCaseError):
        find_cases("lem-transitive", CATALOG)


def test_unknown_case():
    with pytest.raises(UnknownCaseError, match="no catalog case"):
        find_case("no-such-case", CATALOG)


@pytest.mark.parametrize("case", [c for c in CATALOG if c.document], ids=lambda c: c.id)
def test_documents_round_trip_through_the_printer(case):
    doc = parse_document(case.document)
    values = {n: v for n, v in doc.bindings.items() if isinstance(v, Structure | ClassSpec)}
    again = parse_document(format_document(doc.bindings))
    assert {n: again.bindings[n] for n in values} == values


def test_bad_yaml_is_a_catalog_error(tmp_path):
    with pytest.raises(CatalogError, match="cannot read"):
        load_catalog(_write(tmp_path, "cases: [unclosed"))


def test_missing_cases_list(tmp_path):
    with pytest.raises(CatalogError, match="'cases' list"):
        load_catalog(_write(tmp_path, "case: []\n"))


def test_unknown_operation(tmp_path):
    text = """
cases:
  - id: mystery
    operation: frobnicate
    expected: pass
    anchor: nowhere
    provenance: trivial
"""
    with pytest.raises(CatalogError, match="unknown operation 'frobnicate'"):
        load_catalog(_write(tmp_path, text))


def test_invalid_case_fields(tmp_path):
    text = """
cases:
  - id: Not An Id
    operation: membership
    expected: maybe
    anchor: somewhere
    provenance: trivial
"""
    with pytest.raises(CatalogError, match="case #0"):
        load_catalog(_write(tmp_path, text))


def test_document_errors_name_the_case(tmp_path):
    text = """
cases:
  - id: broken
    operation: membership
    document: "struct [E/2] 2 { E: (0,5) }"
    expected: pass
    anchor: somewhere
    provenance: trivial
"""
    with pytest.raises(CatalogError, match="case 'broken'.*entry out of range"):
        load_catalog(_write(tmp_path, text))


def test_duplicate_ids(tmp_path):
    case = """
  - id: twice
    operation: check_hp
    document: class K = builtin graphs
    params: {size: 1}
    expected: pass
    anchor: somewhere
    provenance: trivial
"""
    (tmp_path / "a.yaml").write_text("cases:" + case, encoding="utf-8")
    (tmp_path / "b.yaml").write_text("cases:" + case, encoding="utf-8")
    with pytest.raises(CatalogError, match="duplicate case id 'twice'"):
        load_catalog(tmp_path)


def test_group_name_may_not_be_a_case_id(tmp_path):
    text = """
cases:
  - id: pair
    operation: check_hp
    document: class K = builtin graphs
    params: {size: 1}
    expected: pass
    anchor: somewhere
    provenance: trivial
  - id: pair-two
    group: pair
    operation: check_hp
    document: class K = builtin graphs
    params: {size: 2}
    expected: pass
    anchor: somewhere
    provenance: trivial
"""
    with pytest.raises(CatalogError, match="also case ids"):
        load_catalog(_write(tmp_path, text))
