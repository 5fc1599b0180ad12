import pytest

from apps.amalgamation.datatype import PSystem
from apps.amalgamation.exceptions import AmalgamationError
from apps.amalgamation.services.amalgams import check_ap
from apps.amalgamation.services.systems import (
    base_systems,
    check_disjoint_n,
    colimit_base,
    colimit_size_by_inclusion_exclusion,
    solve_disjoint_n,
    system_from_colimit,
    verify_p_system,
    vertex_system,
)
from apps.classes.services.builtins import builtin
from apps.classes.services.membership import contains
from apps.classes.specs import full_class, lex_class, super_class
from apps.kernel.builders import bare_set, complete_graph, digraph, equivalence, graph, linear_order, path_graph
from apps.kernel.datatype import Verdict
from apps.kernel.structures import Embedding

P0, P1, P2 = frozenset({0}), frozenset({1}), frozenset({2})
P01, P02, P12 = frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})
EMPTY = frozenset()
SETS = builtin("sets")
GRAPHS = builtin("graphs")


def _transitivity_system() -> PSystem:
    together, apart = equivalence(2, [[0, 1]]), equivalence(2, [[0], [1]])
    return vertex_system(3, {P01: together, P12: together, P02: apart})


def _cyclic_order_system() -> PSystem:
    return vertex_system(3, {P01: linear_order(2), P12: linear_order(2), P02: digraph(2, [(1, 0)])})


# ─── Axioms ─────────────────────────────────────────────────────────────────────


def test_transitivity_system_is_valid():
    sys = _transitivity_system()
    assert sys.is_base()
    assert verify_p_system(sys) is None


def test_stored_non_identity_self_map_is_reported():
    sys = _transitivity_system()
    a = sys.structures[P01]
    swapped = PSystem(n=3, structures=sys.structures, maps={**sys.maps, (P01, P01): Embedding(a, a, (1, 0))})
    violation = verify_p_system(swapped)
    assert violation.axiom == "identity"


def test_images_meeting_outside_the_intersection_are_reported():
    point = bare_set(1)
    structures = {EMPTY: bare_set(0), P0: point, P1: point, P01: point}
    maps = {
        (EMPTY, P0): Embedding(bare_set(0), point, ()),
        (EMPTY, P1): Embedding(bare_set(0), point, ()),
        (EMPTY, P01): Embedding(bare_set(0), point, ()),
        (P0, P01): Embedding(point, point, (0,)),
        (P1, P01): Embedding(point, point, (0,)),
    }
    violation = verify_p_system(PSystem(n=2, structures=structures, maps=maps))
    assert violation.axiom == "disjointness"
    assert violation.witness == (P0, P1, P01, 0)


def test_missing_intersection_is_reported():
    structures = {P0: bare_set(1), P1: bare_set(1)}
    assert verify_p_system(PSystem(n=2, structures=structures, maps={})).axiom == "closure"


def test_vertex_system_rejects_disagreeing_structures():
    with pytest.raises(AmalgamationError):
        vertex_system(2, {P01: complete_graph(2), P0: complete_graph(2)})


# ─── Colimits ───────────────────────────────────────────────────────────────────


def test_transitivity_colimit_is_three_points():
    col = colimit_base(_transitivity_system())
    s = col.structure
    assert s.size == 3
    assert s.holds("E", (0, 1))
    assert s.holds("E", (1, 2))
    assert not s.holds("E", (0, 2))
    assert col.origin == (P0, P1, P2)


def test_colimit_of_empty_pieces_is_empty():
    sys = system_from_colimit(3, bare_set(0), ())
    assert colimit_base(sys).structure.size == 0


def test_two_sided_colimit_is_the_pushout():
    # a point shared by two edges
    sys = system_from_colimit(2, path_graph(3), (P0, EMPTY, P1))
    col = colimit_base(sys)
    assert col.structure.size == sys.structures[P0].size + sys.structures[P1].size - sys.structures[EMPTY].size
    assert col.structure.size == 3


@pytest.mark.parametrize("n, base", [(2, 2), (3, 1), (3, 2)])
def test_colimit_size_matches_inclusion_exclusion(n, base):
    for sys in base_systems(GRAPHS, n, base):
        assert colimit_base(sys).structure.size == colimit_size_by_inclusion_exclusion(sys)


def test_invalid_system_has_no_colimit():
    sys = _transitivity_system()
    a = sys.structures[P01]
    broken = PSystem(n=3, structures=sys.structures, maps={**sys.maps, (P01, P01): Embedding(a, a, (1, 0))})
    with pytest.raises(AmalgamationError):
        colimit_base(broken)


# ─── Enumeration and solving ────────────────────────────────────────────────────


def test_two_sided_graph_systems_with_point_pieces():
    # pieces of at most one element: nothing, a shared point, or points born on either side
    assert len(base_systems(GRAPHS, 2, 1)) == 5


def test_system_arity_is_bounded():
    with pytest.raises(AmalgamationError):
        base_systems(GRAPHS, 5, 1)


def test_graph_system_is_solved_on_its_colimit():
    sys = vertex_system(3, {P01: complete_graph(2), P12: complete_graph(2), P02: graph(2, [])})
    solved = solve_disjoint_n(GRAPHS, sys)
    assert solved is not None
    assert solved.structures[solved.top].size == 3
    assert verify_p_system(solved) is None


def test_only_base_systems_are_solved():
    solved = solve_disjoint_n(GRAPHS, vertex_system(3, {P01: complete_graph(2)}))
    with pytest.raises(AmalgamationError):
        solve_disjoint_n(GRAPHS, solved)


def test_cyclic_order_system_has_no_solution():
    assert solve_disjoint_n(builtin("linear_orders"), _cyclic_order_system()) is None


@pytest.mark.parametrize("name", ["linear_orders", "equivalence_relations", "partial_orders"])
def test_transitive_classes_fail_disjoint_3_amalgamation(name):
    report = check_disjoint_n(builtin(name), 3, 2)
    assert report.verdict is Verdict.FAIL
    assert colimit_base(report.witness).structure.size == 3


def test_linear_order_counter_system_is_a_cycle():
    report = check_disjoint_n(builtin("linear_orders"), 3, 2)
    arcs = colimit_base(report.witness).structure.rel("R")
    assert sorted(a for a, _ in arcs) == [0, 1, 2]


def test_graphs_have_disjoint_3_amalgamation():
    report = check_disjoint_n(GRAPHS, 3, 2)
    assert report.verdict is Verdict.PASS
    assert report.stats["systems"] > 0


@pytest.mark.slow
def test_tournaments_have_disjoint_3_amalgamation():
    assert check_disjoint_n(builtin("tournaments"), 3, 2).verdict is Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("product", [lex_class, full_class])
def test_products_of_sets_fail_disjoint_3_amalgamation(product):
    assert check_disjoint_n(product(SETS, SETS), 3, 2).verdict is Verdict.FAIL


@pytest.mark.slow
def test_superposed_graphs_have_disjoint_3_amalgamation():
    k = super_class(GRAPHS, GRAPHS)
    report = check_disjoint_n(k, 3, 2)
    assert report.verdict is Verdict.PASS


@pytest.mark.parametrize(("name", "base", "verdict"), [
    ("graphs", 2, Verdict.PASS),
    ("linear_orders", 2, Verdict.PASS),
    ("forests", 3, Verdict.FAIL),
])
def test_disjoint_2_amalgamation_agrees_with_strong_amalgamation(name, base, verdict):
    k = builtin(name)
    assert check_disjoint_n(k, 2, base).verdict is verdict
    assert check_ap(k, base, 2 * base, strong=True).verdict is verdict


def test_disjoint_amalgamation_is_monotone_in_arity():
    assert check_disjoint_n(GRAPHS, 3, 1).verdict is Verdict.PASS
    assert check_disjoint_n(GRAPHS, 2, 1).verdict is Verdict.PASS


def test_solved_top_is_a_member():
    for sys in base_systems(GRAPHS, 3, 1):
        solved = solve_disjoint_n(GRAPHS, sys)
        assert solved is not None
        assert contains(GRAPHS, solved.structures[solved.top])
