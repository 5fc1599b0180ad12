import pytest

from apps.amalgamation.datatype import AmalgInstance, Amalgam
from apps.amalgamation.exceptions import AmalgamationError
from apps.amalgamation.services.amalgams import (
    ap_instances,
    check_ap,
    check_ap_instance,
    check_jep,
    embeddings_up_to_aut,
    verify_amalgam,
)
from apps.classes.services.builtins import builtin
from apps.classes.specs import full_class, lex_class, super_class
from apps.kernel.builders import complete_graph, edgeless_graph, graph, linear_order, path_graph
from apps.kernel.datatype import Verdict
from apps.kernel.exceptions import EmbeddingError, SignatureError
from apps.kernel.structures import Embedding, Signature, Structure

GRAPHS = builtin("graphs")
FORESTS = builtin("forests")
FULL_SIG = Signature.of(("E0", 2), ("E1", 2))


def _edge_over_point() -> AmalgInstance:
    return AmalgInstance.of(complete_graph(1), complete_graph(2), complete_graph(2), (0,), (0,))


def _anti_diagonal_instance() -> AmalgInstance:
    # (0,0), (1,1) inside (0,0), (1,1), (0,1)
    a = Structure.build(FULL_SIG, 2, {"E0": [(0, 0), (1, 1)], "E1": [(0, 0), (1, 1)]})
    b = Structure.build(FULL_SIG, 3, {
        "E0": [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)],
        "E1": [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)],
    })
    return AmalgInstance.of(a, b, b, (0, 1), (0, 1))


# ─── Instances ──────────────────────────────────────────────────────────────────


def test_instance_rejects_non_embedding():
    with pytest.raises(EmbeddingError):
        AmalgInstance.of(complete_graph(2), edgeless_graph(2), edgeless_graph(2), (0, 1), (0, 1))


def test_verify_amalgam_flags_square_that_does_not_commute():
    inst = _edge_over_point()
    c = path_graph(3)
    am = Amalgam(c, Embedding(inst.b0, c, (0, 1)), Embedding(inst.b1, c, (2, 1)))
    assert "does not commute" in verify_amalgam(inst, am)


def test_verify_amalgam_flags_overlap_when_strong():
    inst = _edge_over_point()
    c = complete_graph(2)
    am = Amalgam(c, Embedding(inst.b0, c, (0, 1)), Embedding(inst.b1, c, (0, 1)))
    assert verify_amalgam(inst, am) is None
    assert "overlap outside A" in verify_amalgam(inst, am, strong=True)


# ─── One instance ───────────────────────────────────────────────────────────────


def test_graph_amalgam_glues_when_not_strong():
    am = check_ap_instance(GRAPHS, _edge_over_point(), 4)
    assert am is not None
    assert am.c.size == 2
    assert verify_amalgam(_edge_over_point(), am, k=GRAPHS) is None


def test_graph_strong_amalgam_at_pushout_size():
    inst = _edge_over_point()
    am = check_ap_instance(GRAPHS, inst, 4, strong=True)
    assert am is not None
    assert am.c.size == 3
    assert verify_amalgam(inst, am, strong=True, k=GRAPHS) is None


def test_planar_amalgam_would_induce_k33():
    a = edgeless_graph(4)
    b0 = graph(6, [(i, j) for i in range(3) for j in (4, 5)])
    b1 = graph(5, [(i, 4) for i in range(4)])
    inst = AmalgInstance.of(a, b0, b1, (0, 1, 2, 3), (0, 1, 2, 3))
    assert check_ap_instance(builtin("planar_graphs"), inst, 11) is None


def test_forest_amalgam_would_close_a_five_cycle():
    inst = AmalgInstance.of(
        edgeless_graph(2), graph(3, [(0, 2), (2, 1)]), graph(4, [(0, 2), (2, 3), (3, 1)]), (0, 1), (0, 1),
    )
    assert check_ap_instance(FORESTS, inst, 7) is None


def test_anti_diagonal_has_no_strong_amalgam_in_full_sets():
    k = full_class(builtin("sets"), builtin("sets"))
    inst = _anti_diagonal_instance()
    assert check_ap_instance(k, inst, 4, strong=True) is None
    assert check_ap_instance(k, inst, 4) is not None


def test_host_below_instance_is_rejected():
    with pytest.raises(AmalgamationError):
        check_ap_instance(GRAPHS, _edge_over_point(), 1)


def test_signature_mismatch_is_rejected():
    with pytest.raises(SignatureError):
        check_ap_instance(builtin("linear_orders"), _edge_over_point(), 4)


# ─── Sweeps ─────────────────────────────────────────────────────────────────────


def test_embeddings_up_to_aut_collapses_symmetric_targets():
    assert len(embeddings_up_to_aut(edgeless_graph(1), complete_graph(3))) == 1
    assert len(embeddings_up_to_aut(edgeless_graph(1), path_graph(3))) == 2
    assert len(embeddings_up_to_aut(linear_order(1), linear_order(2))) == 2


def test_ap_instances_cover_every_shape():
    # (∅, ∅, ∅), (∅, ∅, K1), (∅, K1, K1), (K1, K1, K1)
    assert len(ap_instances(GRAPHS, 1)) == 4


@pytest.mark.parametrize("strong", [False, True])
def test_graphs_amalgamate(strong):
    report = check_ap(GRAPHS, 2, 4, strong=strong)
    assert report.verdict is Verdict.PASS
    assert report.stats["instances"] > 0


def test_forests_fail_strong_amalgamation():
    report = check_ap(FORESTS, 3, 6, strong=True)
    assert report.verdict is Verdict.FAIL
    assert isinstance(report.witness, AmalgInstance)


def test_graphs_have_joint_embedding():
    assert check_jep(GRAPHS, 3, 6).verdict is Verdict.PASS


def test_union_of_two_graph_classes_fails_joint_embedding():
    report = check_jep(builtin("graph_union"), 2, 6)
    assert report.verdict is Verdict.FAIL
    pair = report.witness
    assert {bool(pair.b0.rel("R0")), bool(pair.b1.rel("R0"))} == {True, False}


def test_joint_embedding_miss_below_the_pair_size_is_inconclusive():
    # an R0-edge and an R1-edge need a host of four to rule out every joint embedding
    report = check_jep(builtin("graph_union"), 2, 3)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.witness.b0.size + report.witness.b1.size > 3


def test_superposed_singleton_marks_fail_joint_embedding():
    umo = builtin("unary_at_most_one")
    report = check_jep(super_class(umo, umo), 1, 4)
    assert report.verdict is Verdict.FAIL
    assert report.witness.b0.size == report.witness.b1.size == 1


@pytest.mark.slow
def test_lex_of_orders_has_strong_amalgamation():
    lo = builtin("linear_orders")
    assert check_ap(lex_class(lo, lo), 3, 6, strong=True).verdict is Verdict.PASS
