from itertools import product

import pytest

from apps.classes.services.builtins import builtin
from apps.classes.services.membership import contains
from apps.classes.specs import full_class, lex_class, super_class
from apps.kernel.builders import bare_set, complete_graph, edgeless_graph, graph, linear_order, path_graph
from apps.kernel.datatype import Verdict
from apps.kernel.exceptions import SignatureError, StructureError
from apps.kernel.services.ages import blocks_of
from apps.kernel.services.canonical import is_isomorphic
from apps.kernel.services.embeddings import enumerate_embeddings
from apps.kernel.structures import Signature, Structure
from apps.products.datatype import (
    FullAssembly,
    FullDecomposition,
    Inconclusive,
    LexAssembly,
    Rejection,
    SuperDecomposition,
    Superposition,
)
from apps.products.services.assembly import (
    full_product,
    full_structure,
    lex_product,
    lex_structure,
    superpose,
    superpose_structures,
)
from apps.products.services.decompose import (
    decompose_full,
    decompose_lex,
    decompose_super,
    full_embeddability_oracle,
)
from apps.products.services.identities import (
    age_product_check,
    aut_order_product_check,
    factor_full_embedding,
    factor_lex_embedding,
)
from common.iterables_utils import partitions

SETS = builtin("sets")
GRAPHS = builtin("graphs")
FULL_SIG = Signature.of(("E0", 2), ("E1", 2))


def _equivalence_pairs(blocks):
    return [(x, y) for block in blocks for x in block for y in block]


# ─── Assembly ───────────────────────────────────────────────────────────────────


def test_lex_with_point_fibers_is_equality():
    p = lex_product(bare_set(1), bare_set(3))
    assert p.structure.size == 3
    assert blocks_of(p.structure.rel("E"), 3) == ((0,), (1,), (2,))


def test_sets_lex_sets_gives_two_classes():
    p = lex_product(bare_set(2), bare_set(2)).structure
    assert blocks_of(p.rel("E"), 4) == ((0, 1), (2, 3))
    assert len(p.rel("E")) == 8


def test_lex_size_is_sum_of_fibers():
    asm = LexAssembly(base=bare_set(3), fibers=(bare_set(1), bare_set(3), bare_set(2)), fiber_sig=Signature())
    built = lex_structure(asm)
    assert built.structure.size == 6
    assert built.points[0] == (0, 0)
    assert built.points[1] == (0, 1)


def test_lex_renames_colliding_symbols():
    p = lex_product(complete_graph(2), path_graph(2))
    assert p.structure.sig.names == ("E", "E_0", "E_1")
    assert p.rename_map == {"left": {"E": "E_0"}, "right": {"E": "E_1"}}


def test_lex_relations_follow_fibers_and_base():
    p = lex_product(complete_graph(2), path_graph(2))
    s = p.structure
    # intra-fiber edge, cross-fiber edge from the base edge
    assert s.holds("E_0", (p.index((0, 0)), p.index((1, 0))))
    assert s.holds("E_1", (p.index((0, 0)), p.index((1, 1))))
    assert not s.holds("E_0", (p.index((0, 0)), p.index((0, 1))))


def test_full_of_two_point_sets():
    p = full_product(bare_set(2), bare_set(2)).structure
    assert p.size == 4
    assert blocks_of(p.rel("E0"), 4) == ((0, 1), (2, 3))
    assert blocks_of(p.rel("E1"), 4) == ((0, 2), (1, 3))


def test_full_with_empty_factor_is_empty():
    assert full_product(complete_graph(2), bare_set(0)).structure.size == 0


def test_full_left_relation_reads_first_coordinates():
    p = full_product(complete_graph(2), bare_set(2))
    s = p.structure
    for b, b2 in product(range(2), repeat=2):
        assert s.holds("E", (p.index((0, b)), p.index((1, b2))))
        assert not s.holds("E", (p.index((0, b)), p.index((0, b2))))


def test_superpose_edge_with_order():
    s = superpose(complete_graph(2), linear_order(2)).structure
    assert s.rel("E") == frozenset({(0, 1), (1, 0)})
    assert s.rel("R") == frozenset({(0, 1)})
    assert s.reduct(["E"]) == complete_graph(2)


def test_superpose_size_mismatch():
    with pytest.raises(StructureError):
        superpose(complete_graph(2), linear_order(3))


def test_superposition_pulls_back_along_the_aligner():
    built = superpose_structures(Superposition(complete_graph(2), linear_order(2), (1, 0)))
    assert built.points == ((0, 1), (1, 0))
    assert built.structure.rel("R") == frozenset({(1, 0)})


def test_superposition_needs_a_bijective_aligner():
    with pytest.raises(StructureError, match="not a bijection"):
        superpose_structures(Superposition(complete_graph(2), linear_order(2), (0, 0)))


def test_full_structure_points_are_sorted_pairs():
    built = full_structure(FullAssembly(bare_set(2), bare_set(3)))
    assert built.points == tuple(product(range(2), range(3)))
    assert built.index((1, 2)) == 5


def test_superpose_then_decompose_recovers_reducts():
    k = super_class(GRAPHS, builtin("linear_orders"))
    s = superpose(path_graph(3), linear_order(3), (2, 0, 1)).structure
    result = decompose_super(s, GRAPHS, builtin("linear_orders"))
    assert isinstance(result, SuperDecomposition)
    assert result.left == path_graph(3)
    assert is_isomorphic(result.right, linear_order(3))
    assert contains(k, s)


# ─── Decomposition ──────────────────────────────────────────────────────────────


def test_decompose_lex_accepts_two_classes():
    s = Structure.build(Signature.of(("E", 2)), 4, {"E": _equivalence_pairs([[0, 1], [2, 3]])})
    result = decompose_lex(s, SETS, SETS)
    assert isinstance(result, LexAssembly)
    assert [f.size for f in result.fibers] == [2, 2]


def test_decompose_lex_rejects_non_transitive_e():
    s = Structure.build(Signature.of(("E", 2)), 3, {"E": [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]})
    result = decompose_lex(s, SETS, SETS)
    assert isinstance(result, Rejection)
    assert result.reason == "E not equivalence"


def test_decompose_lex_rejects_cross_class_fiber_tuple():
    k = lex_class(GRAPHS, SETS)
    s = Structure.build(k.sig, 2, {"E": [(0, 0), (1, 1)], "E_0": [(0, 1), (1, 0)]})
    result = decompose_lex(s, GRAPHS, SETS)
    assert isinstance(result, Rejection)
    assert result.reason == "cross-class L0 tuple"


def test_decompose_lex_round_trip():
    fibers = (complete_graph(2), edgeless_graph(1), edgeless_graph(2))
    asm = LexAssembly(base=path_graph(3), fibers=fibers, fiber_sig=complete_graph(2).sig)
    built = lex_structure(asm).structure
    result = decompose_lex(built, GRAPHS, GRAPHS)
    assert isinstance(result, LexAssembly)
    assert result.base == path_graph(3)
    assert [f.size for f in result.fibers] == [2, 1, 2]
    assert all(is_isomorphic(x, y) for x, y in zip(result.fibers, asm.fibers, strict=True))


def test_decompose_full_accepts_antidiagonal():
    s = Structure.build(FULL_SIG, 2, {"E0": [(0, 0), (1, 1)], "E1": [(0, 0), (1, 1)]})
    result = decompose_full(s, SETS, SETS, bound=4)
    assert isinstance(result, FullDecomposition)
    assert result.q0 == bare_set(2)
    assert result.q1 == bare_set(2)


def test_decompose_full_rejects_shared_classes():
    all_pairs = [(x, y) for x in range(2) for y in range(2)]
    s = Structure.build(FULL_SIG, 2, {"E0": all_pairs, "E1": all_pairs})
    result = decompose_full(s, SETS, SETS, bound=4)
    assert isinstance(result, Rejection)
    assert result.reason == "class intersection > 1"


def test_decompose_full_signature_mismatch():
    with pytest.raises(SignatureError):
        decompose_full(complete_graph(2), SETS, SETS, bound=4)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_decompose_full_agrees_with_oracle(n):
    items = list(range(n))
    for p0, p1 in product(list(partitions(items)), repeat=2):
        s = Structure.build(FULL_SIG, n, {"E0": _equivalence_pairs(p0), "E1": _equivalence_pairs(p1)})
        accepted = isinstance(decompose_full(s, SETS, SETS, bound=3), FullDecomposition)
        assert accepted == full_embeddability_oracle(s, SETS, SETS, max_factor_size=3), (p0, p1)


def test_decompose_full_and_oracle_reject_non_equivalence():
    s = Structure.build(FULL_SIG, 2, {"E0": [(0, 1)], "E1": [(0, 0), (1, 1)]})
    assert isinstance(decompose_full(s, SETS, SETS, bound=3), Rejection)
    assert not full_embeddability_oracle(s, SETS, SETS, max_factor_size=3)


def test_full_class_membership_uses_hosts():
    k = full_class(GRAPHS, SETS)
    member = full_product(path_graph(3), bare_set(2)).structure
    assert contains(k, member)
    assert not isinstance(decompose_full(member, GRAPHS, SETS, bound=4), Inconclusive)


# ─── Identities ─────────────────────────────────────────────────────────────────


def test_age_lex_edge_over_pair():
    assert age_product_check(complete_graph(2), edgeless_graph(2), "lex", 3).verdict is Verdict.PASS


def test_age_full_points():
    assert age_product_check(bare_set(1), bare_set(1), "full", 1).verdict is Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("mode", ["lex", "full"])
def test_age_identity_sweep(mode):
    shapes = [edgeless_graph(1), complete_graph(2), edgeless_graph(2), path_graph(3), complete_graph(3)]
    for a, b in product(shapes, repeat=2):
        assert age_product_check(a, b, mode, 3).verdict is Verdict.PASS, (a, b)


def test_aut_orders_of_set_products():
    report = aut_order_product_check(bare_set(2), bare_set(2))
    assert report.verdict is Verdict.PASS
    assert report.stats["lex"] == 8
    assert report.stats["full"] == 4


def test_aut_orders_with_a_point():
    b = path_graph(3)
    report = aut_order_product_check(edgeless_graph(1), b)
    assert report.stats["lex"] == 2
    assert report.stats["full"] == 2


def test_aut_order_edge_over_three_points():
    report = aut_order_product_check(complete_graph(2), edgeless_graph(3))
    assert report.stats["lex"] == 48
    assert report.verdict is Verdict.PASS


def test_aut_order_needs_nonempty_factors():
    with pytest.raises(StructureError):
        aut_order_product_check(bare_set(0), bare_set(2))


def test_full_embeddings_factor():
    shapes = [edgeless_graph(1), complete_graph(2), edgeless_graph(2)]
    for a, b, c, d in product(shapes, repeat=4):
        source, target = full_product(a, b), full_product(c, d)
        for e in enumerate_embeddings(source.structure, target.structure):
            assert factor_full_embedding(e, source, target) is not None


def test_lex_embeddings_factor():
    fibers = [edgeless_graph(1), complete_graph(2)]
    bases = [edgeless_graph(1), complete_graph(2), path_graph(3)]
    for a, b, c, d in product(fibers, bases, fibers, bases):
        source, target = lex_product(a, b), lex_product(c, d)
        for e in enumerate_embeddings(source.structure, target.structure):
            assert factor_lex_embedding(e, source, target) is not None
