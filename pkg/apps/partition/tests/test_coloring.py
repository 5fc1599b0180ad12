import pytest

from apps.classes.services.builtins import builtin
from apps.classes.services.enumeration import enumerate_members_upto
from apps.kernel.builders import bare_set, complete_graph, edgeless_graph, path_graph
from apps.kernel.services.embeddings import embedding_images
from apps.partition.datatype import Coloring
from apps.partition.exceptions import ColoringError, WitnessError
from apps.partition.services.coloring import (
    exhaustive_bad_coloring,
    find_bad_coloring,
    find_indivisibility_witness,
    verify_indivisibility_witness,
)

GRAPHS = builtin("graphs")
SETS = builtin("sets")


# ─── Bad colorings ──────────────────────────────────────────────────────────────


def test_every_two_coloring_of_a_triangle_has_a_monochromatic_edge():
    assert find_bad_coloring(complete_graph(2), complete_graph(3), 2) is None


def test_single_edge_is_split_by_two_colors():
    coloring = find_bad_coloring(complete_graph(2), complete_graph(2), 2)
    assert coloring.assignment == (0, 1)


@pytest.mark.parametrize("b", [complete_graph(1), complete_graph(3), edgeless_graph(4), path_graph(5)])
def test_points_are_always_monochromatic(b):
    assert find_bad_coloring(complete_graph(1), b, 3) is None


def test_empty_pattern_counts_as_monochromatic():
    assert find_bad_coloring(edgeless_graph(0), complete_graph(3), 2) is None


def test_host_without_copies_has_a_constant_bad_coloring():
    coloring = find_bad_coloring(complete_graph(2), edgeless_graph(3), 2)
    assert coloring.assignment == (0, 0, 0)


def test_one_color_is_rejected():
    with pytest.raises(ColoringError):
        find_bad_coloring(complete_graph(2), complete_graph(3), 1)


@pytest.mark.parametrize("assignment", [(0,), (0, 2), (-1, 0)])
def test_coloring_must_be_total_and_in_range(assignment):
    with pytest.raises(ColoringError):
        Coloring(complete_graph(2), 2, assignment)


def test_bad_colorings_split_every_copy():
    for a in enumerate_members_upto(GRAPHS, 2):
        for b in enumerate_members_upto(GRAPHS, 4):
            coloring = find_bad_coloring(a, b, 2)
            if coloring is None:
                continue
            for img in embedding_images(a, b):
                assert not coloring.is_monochromatic(img)


@pytest.mark.parametrize("colors", [2, 3])
def test_backtracking_agrees_with_exhaustive_oracle(colors):
    for a in enumerate_members_upto(GRAPHS, 2):
        for b in enumerate_members_upto(GRAPHS, 4):
            fast = find_bad_coloring(a, b, colors)
            slow = exhaustive_bad_coloring(a, b, colors)
            assert (fast is None) == (slow is None), (a, b)


# ─── Witness verification ───────────────────────────────────────────────────────


def test_triangle_witnesses_edge_for_two_colors():
    assert verify_indivisibility_witness(GRAPHS, complete_graph(2), 2, complete_graph(3))


@pytest.mark.parametrize(("m", "colors"), [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_pigeonhole_witnesses_for_sets(m, colors):
    need = colors * (m - 1) + 1
    assert verify_indivisibility_witness(SETS, bare_set(m), colors, bare_set(need))
    assert not verify_indivisibility_witness(SETS, bare_set(m), colors, bare_set(need - 1))


@pytest.mark.parametrize("n", [2, 3, 6])
def test_paths_never_witness_edges_in_forests(n):
    assert not verify_indivisibility_witness(builtin("forests"), complete_graph(2), 2, path_graph(n))


def test_non_member_witness_is_rejected():
    with pytest.raises(WitnessError):
        verify_indivisibility_witness(builtin("forests"), complete_graph(2), 2, complete_graph(3))


# ─── Witness search ─────────────────────────────────────────────────────────────


def test_smallest_edge_witness_is_the_triangle():
    w = find_indivisibility_witness(GRAPHS, complete_graph(2), 2, 4)
    assert w == complete_graph(3)


def test_sets_witness_is_found_by_pigeonhole():
    assert find_indivisibility_witness(SETS, bare_set(2), 2, 5).size == 3


def test_four_colors_never_force_a_planar_k4():
    assert find_indivisibility_witness(builtin("planar_graphs"), complete_graph(4), 4, 5) is None


def test_search_rejects_non_member_pattern():
    with pytest.raises(WitnessError):
        find_indivisibility_witness(builtin("forests"), complete_graph(3), 2, 4)


@pytest.mark.parametrize(("cls", "pattern", "colors"), [
    (SETS, bare_set(2), 3),
    (GRAPHS, complete_graph(2), 2),
    (GRAPHS, edgeless_graph(2), 2),
])
def test_witness_survives_fewer_colors(cls, pattern, colors):
    w = find_indivisibility_witness(cls, pattern, colors, 5)
    assert w is not None
    for fewer in range(2, colors + 1):
        assert verify_indivisibility_witness(cls, pattern, fewer, w)
