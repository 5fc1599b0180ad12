import pytest

from apps.classes.services.builtins import builtin
from apps.classes.specs import ClassKind, forbidden_class, lex_class, super_class
from apps.configurations.formulas import And, Atom, BlockEq, Eq, Not, Var, format_formula
from apps.kernel.builders import GRAPH_SIG, complete_graph, equivalence, path_graph, unary
from apps.kernel.structures import Signature, Structure
from apps.workbench.exceptions import DslError
from apps.workbench.services.dsl import parse_class, parse_document, parse_dsl, parse_formula, parse_structure
from apps.workbench.services.printer import format_class, format_document, format_structure

SETS = builtin("sets")
K3 = "struct [E/2] 3 { E: (0,1) (1,0) (0,2) (2,0) (1,2) (2,1) }"


# ─── Structures ─────────────────────────────────────────────────────────────────


def test_triangle_literal():
    s = parse_structure(K3)
    assert s.size == 3
    assert s.tuple_count == 6
    assert s == complete_graph(3)


def test_unlisted_relations_are_empty():
    s = parse_structure("struct [E/2, P/1] 2 { P: (1) }")
    assert s.rel("E") == frozenset()
    assert s == Structure.build(Signature.of(("E", 2), ("P", 1)), 2, {"P": [(1,)]})


def test_named_signature_and_structure():
    doc = parse_document("""
        sig G = [E/2]
        structure P3 = struct G 3 { E: (0,1) (1,0) (1,2) (2,1) }  # a path
    """)
    assert doc.bindings["G"] == GRAPH_SIG
    assert doc.structure("P3") == path_graph(3)


def test_trailing_reference_is_the_result():
    assert parse_dsl("structure T = " + K3 + "\nT") == complete_graph(3)


# ─── Classes ────────────────────────────────────────────────────────────────────


def test_lex_class_binding():
    k = parse_document("class W = lex(builtin sets, builtin sets)").klass("W")
    assert k == lex_class(SETS, SETS)
    assert k.kind is ClassKind.LEX
    assert k.label == "W"


def test_nested_products_and_references():
    k = parse_class("class G = builtin graphs\nsuper(G, lex(builtin sets, G))")
    assert k == super_class(builtin("graphs"), lex_class(SETS, builtin("graphs")))


def test_parametric_builtin():
    assert parse_class("builtin hypergraphs(3)").sig == Signature.of(("E", 3))


def test_forbidden_class_of_named_patterns():
    k = parse_class(f"structure T = {K3}\nforbidden {{ T }} over [E/2]")
    assert k == forbidden_class(GRAPH_SIG, [complete_graph(3)])


# ─── Errors ─────────────────────────────────────────────────────────────────────


def test_malformed_tuple_has_a_position():
    with pytest.raises(DslError) as err:
        parse_dsl("sig G = [E/2]\nstruct G 2 { E: (0,) }")
    assert err.value.line == 2
    assert err.value.column > 1
    assert "syntax error" in err.value.message


def test_entry_out_of_range():
    with pytest.raises(DslError, match="entry out of range") as err:
        parse_dsl("struct [E/2] 2 {\n  E: (0,1) (1,2)\n}")
    assert err.value.line == 2
    assert err.value.column == 12


def test_arity_mismatch():
    with pytest.raises(DslError, match="arity mismatch"):
        parse_dsl("struct [E/2] 3 { E: (0,1,2) }")


def test_unknown_symbol():
    with pytest.raises(DslError, match="not in"):
        parse_dsl("struct [E/2] 3 { R: (0,1) }")


def test_undefined_name():
    with pytest.raises(DslError, match="undefined name 'H'") as err:
        parse_dsl("struct H 2 { }")
    assert (err.value.line, err.value.column) == (1, 8)


def test_rebinding_a_name():
    with pytest.raises(DslError, match="already bound"):
        parse_document("class K = builtin sets\nclass K = builtin graphs")


def test_unknown_builtin():
    with pytest.raises(DslError, match="unknown builtin class"):
        parse_class("builtin trees")


def test_class_where_a_structure_is_expected():
    with pytest.raises(DslError, match="expected a structure"):
        parse_structure("builtin graphs")


def test_empty_input():
    with pytest.raises(DslError, match="no structure or class"):
        parse_dsl("# nothing here\n")


# ─── Printer round trips ────────────────────────────────────────────────────────


@pytest.mark.parametrize("s", [
    complete_graph(3),
    path_graph(4),
    equivalence(3, [[0, 1], [2]]),
    unary(3, [0, 2]),
    Structure.empty(Signature.of(), 2),
    Structure.build(Signature.of(("T", 3), ("P", 1)), 3, {"T": [(0, 1, 2), (2, 1, 0)], "P": [(1,)]}),
])
def test_structure_round_trip(s):
    assert parse_structure(format_structure(s)) == s


def test_structure_is_printed_with_sorted_tuples():
    assert format_structure(path_graph(3)) == "struct [E/2] 3 { E: (0,1) (1,0) (1,2) (2,1) }"
    assert format_structure(Structure.empty(GRAPH_SIG, 2)) == "struct [E/2] 2 { }"


@pytest.mark.parametrize("text", [
    "builtin graphs",
    "builtin hypergraphs(3)",
    "lex(builtin sets, builtin linear_orders)",
    "full(builtin graphs, builtin sets)",
    "super(builtin tournaments, lex(builtin sets, builtin sets))",
    f"forbidden {{ {K3} }} over [E/2]",
])
def test_class_round_trip(text):
    k = parse_class(text)
    assert format_class(k) == text
    assert parse_class(format_class(k)) == k


def test_document_round_trip():
    doc = parse_document(f"sig G = [E/2]\nstructure T = {K3}\nclass W = lex(builtin sets, builtin sets)")
    again = parse_document(format_document(doc.bindings))
    assert again.bindings == doc.bindings


# ─── Formulas ───────────────────────────────────────────────────────────────────


def test_formula_prefix_notation():
    phi = parse_formula("(and (R x0.0 x1.1) (not (= x0.0 x1.0)) (beq 0 1 [0 1]))")
    assert phi == And((
        Atom("R", (Var(0, 0), Var(1, 1))),
        Not(Eq(Var(0, 0), Var(1, 0))),
        BlockEq(0, 1, (0, 1)),
    ))


@pytest.mark.parametrize("text", ["true", "(or (E x0.0 x1.0) false)", "(not (= x0.1 x1.1))"])
def test_formula_round_trip(text):
    phi = parse_formula(text)
    assert parse_formula(format_formula(phi)) == phi


def test_bad_formula():
    with pytest.raises(DslError, match="syntax error"):
        parse_formula("(and (R x0 x1))")
