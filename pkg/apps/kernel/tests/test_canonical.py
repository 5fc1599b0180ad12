from itertools import combinations, product

import pytest

from apps.kernel.builders import (
    ORDER_SIG,
    complete_graph,
    digraph,
    edgeless_graph,
    equivalence,
    graph,
    path_graph,
    permuted,
)
from apps.kernel.exceptions import SignatureError
from apps.kernel.services.ages import (
    CongruenceViolation,
    QfClassSelector,
    Quotient,
    age_of,
    qf_class,
    quotient_by_congruence,
)
from apps.kernel.services.canonical import (
    as_colored_graph,
    canonical_form,
    canonical_structure,
    is_isomorphic,
    structure_of,
)
from apps.kernel.structures import Signature, Structure, induced_substructure


def test_relabeled_path_is_isomorphic():
    assert is_isomorphic(path_graph(3), graph(3, [(1, 0), (0, 2)]))


def test_triangle_is_not_a_path():
    assert not is_isomorphic(complete_graph(3), path_graph(3))


def test_two_vertex_digraphs_have_four_forms():
    arcs = [(0, 1), (1, 0)]
    shapes = [digraph(2, [a for a, keep in zip(arcs, bits) if keep]) for bits in product([0, 1], repeat=2)]
    loops = [Structure.build(ORDER_SIG, 2, {"R": [(0, 0)]}), Structure.build(ORDER_SIG, 2, {"R": [(0, 0), (1, 1)]})]
    assert len({canonical_form(s) for s in shapes}) == 3
    assert len({canonical_form(s) for s in [*shapes, *loops]}) == 5


@pytest.mark.parametrize(
    "s",
    [
        path_graph(5),
        graph(5, [(0, 1), (1, 2), (2, 0), (3, 4)]),
        digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        equivalence(5, [[0, 3], [1, 2, 4]]),
        Structure.build(Signature.of(("T", 3)), 4, {"T": [(0, 1, 2), (1, 1, 3), (3, 2, 0)]}),
    ],
)
def test_canonical_form_is_permutation_invariant(s):
    cf = canonical_form(s)
    assert all(canonical_form(p) == cf for p in permuted(s))


def test_canonical_structure_realizes_the_form():
    s = graph(4, [(0, 3), (3, 1)])
    assert canonical_form(canonical_structure(s)) == canonical_form(s)
    assert structure_of(canonical_form(s)) == canonical_structure(s)


def test_all_graphs_on_four_vertices_give_eleven_classes():
    pairs = list(combinations(range(4), 2))
    forms = {
        canonical_form(graph(4, [p for p, keep in zip(pairs, bits) if keep]))
        for bits in product([0, 1], repeat=len(pairs))
    }
    assert len(forms) == 11


def test_is_isomorphic_requires_same_signature():
    with pytest.raises(SignatureError):
        is_isomorphic(path_graph(2), digraph(2, []))


def test_age_of_triangle():
    assert set(age_of(complete_graph(3), 2)) == {canonical_form(complete_graph(n)) for n in range(3)}


def test_age_of_path_has_five_shapes():
    # empty, point, edge, non-edge, path
    assert len(age_of(path_graph(3), 3)) == 5


def test_age_of_edgeless():
    assert set(age_of(edgeless_graph(5), 3)) == {canonical_form(edgeless_graph(n)) for n in range(4)}


def test_age_is_monotone_under_substructure():
    s = graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    sub, _ = induced_substructure(s, {0, 1, 4})
    assert set(age_of(sub, 3)) <= set(age_of(s, 5))


def test_qf_class_in_equivalence():
    c = equivalence(4, [[0, 1, 2], [3]])
    assert qf_class(QfClassSelector(c, frozenset({0}), 1)) == {1, 2}
    assert qf_class(QfClassSelector(c, frozenset({0}), 3)) == {3}


def test_qf_class_over_empty_base_uses_loops():
    assert qf_class(QfClassSelector(path_graph(3), frozenset(), 0)) == {0, 1, 2}


def test_qf_class_in_triangle():
    assert qf_class(QfClassSelector(complete_graph(3), frozenset({0}), 1)) == {1, 2}


def test_qf_class_with_cofinite_base_is_the_pivot():
    s = path_graph(4)
    assert qf_class(QfClassSelector(s, frozenset({0, 1, 3}), 2)) == {2}


def test_qf_class_rejects_pivot_in_base():
    with pytest.raises(ValueError, match="pivot"):
        QfClassSelector(path_graph(3), frozenset({1}), 1)


def test_quotient_of_grid_by_columns():
    # sets ⊠ sets on 2×2, element a*2+b; E0 relates equal first coordinate
    grid = Structure.build(
        Signature.of(("E0", 2), ("E1", 2)),
        4,
        {"E0": [(x, y) for x in range(4) for y in range(4) if x // 2 == y // 2],
         "E1": [(x, y) for x in range(4) for y in range(4) if x % 2 == y % 2]},
    )
    columns = [[0, 1], [2, 3]]
    q = quotient_by_congruence(grid, columns, [])
    assert isinstance(q, Quotient)
    assert q.structure.size == 2
    assert q.structure.tuple_count == 0
    assert q.classes == ((0, 1), (2, 3))

    looped = quotient_by_congruence(grid, columns, ["E0"])
    assert isinstance(looped, Quotient)
    assert looped.structure.rel("E0") == frozenset({(0, 0), (1, 1)})
    assert isinstance(quotient_by_congruence(grid, columns, ["E1"]), CongruenceViolation)


def test_quotient_reports_inconsistent_edge():
    q = quotient_by_congruence(path_graph(3), [[0, 1], [2]], ["E"])
    assert isinstance(q, CongruenceViolation)
    assert q.inside in path_graph(3).rel("E")
    assert q.outside not in path_graph(3).rel("E")


def test_quotient_by_equality_is_a_copy():
    s = path_graph(4)
    q = quotient_by_congruence(s, [[x] for x in range(4)], ["E"])
    assert isinstance(q, Quotient)
    assert q.structure == s


MIXED = Structure.build(
    Signature.of(("P", 1), ("R", 2), ("T", 3)),
    4,
    {"P": [(1,), (3,)], "R": [(0, 0), (0, 1), (2, 3)], "T": [(1, 1, 2), (3, 0, 3)]},
)


def test_mixed_arity_forms_are_permutation_invariant():
    cf = canonical_form(MIXED)
    for p in permuted(MIXED):
        assert canonical_form(p) == cf
        assert canonical_structure(p) == structure_of(cf)


def test_unary_colors_separate_forms():
    sig = Signature.of(("P", 1), ("R", 2))
    marked_source = Structure.build(sig, 2, {"P": [(0,)], "R": [(0, 1)]})
    marked_sink = Structure.build(sig, 2, {"P": [(1,)], "R": [(0, 1)]})
    assert not is_isomorphic(marked_source, marked_sink)
    assert is_isomorphic(marked_source, Structure.build(sig, 2, {"P": [(1,)], "R": [(1, 0)]}))


def test_colored_graph_has_a_vertex_per_position():
    # 4 elements, 3 binary tuples with 2 positions each, 2 ternary tuples with 3 each
    assert as_colored_graph(MIXED).number_of_vertices == 4 + 3 * 3 + 2 * 4
