from apps.kernel.builders import complete_graph, digraph, unary
from apps.kernel.structures import Signature, Structure
from apps.workbench.services.dot import export_dot


def _edges(dot: str, arrow: str) -> list[str]:
    return [line for line in dot.splitlines() if f" {arrow} " in line]


def test_triangle_is_three_undirected_edges():
    dot = export_dot(complete_graph(3))
    assert dot.startswith('graph "structure" {')
    assert dot.count("[label=") == 6
    assert _edges(dot, "--") == [
        '  0 -- 1 [label="E"];',
        '  0 -- 2 [label="E"];',
        '  1 -- 2 [label="E"];',
    ]


def test_two_cycle_is_two_arrows():
    dot = export_dot(digraph(2, [(0, 1), (1, 0)]))
    assert dot.startswith("digraph")
    assert _edges(dot, "->") == ['  0 -> 1 [label="R"];', '  1 -> 0 [label="R"];']


def test_symmetric_pair_is_collapsed_next_to_an_arrow():
    s = Structure.build(Signature.of(("E", 2), ("R", 2)), 2, {"E": [(0, 1), (1, 0)], "R": [(0, 1)]})
    dot = export_dot(s)
    assert '  0 -> 1 [label="E", dir=none];' in dot
    assert '  0 -> 1 [label="R"];' in dot


def test_unary_symbols_are_labels():
    dot = export_dot(unary(2, [1]))
    assert '  0 [label="0"];' in dot
    assert '  1 [label="1: P"];' in dot


def test_hyperedge_is_a_factor_node():
    s = Structure.build(Signature.of(("E", 3)), 3, {"E": [(0, 1, 2)]})
    dot = export_dot(s, name="h")
    assert dot.startswith('graph "h" {')
    assert '  f0 [shape=point, xlabel="E(0,1,2)"];' in dot
    assert _edges(dot, "--") == [
        '  f0 -- 0 [label="0"];',
        '  f0 -- 1 [label="1"];',
        '  f0 -- 2 [label="2"];',
    ]


def test_output_is_deterministic():
    s = Structure.build(Signature.of(("E", 2)), 3, {"E": [(2, 1), (1, 2), (0, 1), (1, 0)]})
    assert export_dot(s) == export_dot(Structure.build(s.sig, 3, {"E": [(1, 0), (0, 1), (1, 2), (2, 1)]}))
