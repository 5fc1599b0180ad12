import pytest

from apps.classes.services.builtins import builtin
from apps.classes.services.enumeration import enumerate_members_upto
from apps.classes.services.membership import contains
from apps.configurations.datatype import ConfigEntry, ConfigWitness
from apps.configurations.exceptions import ConfigurationError
from apps.configurations.services.builders import (
    builtin_configuration,
    configuration_entries,
    disjoint_union,
    entry_for,
    identity_configuration,
    inclusion_configuration,
)
from apps.configurations.services.verify import verify_configuration
from apps.kernel.builders import GRAPH_SIG, bare_set, complete_graph, digraph, edgeless_graph, path_graph
from apps.kernel.structures import Structure

GRAPHS = builtin("graphs")


# ─── Builtin doublings ──────────────────────────────────────────────────────────


@pytest.mark.parametrize(("name", "target"), [
    ("dg_to_g", "graphs"),
    ("g_to_po", "partial_orders"),
    ("g_to_t", "tournaments"),
])
def test_builtin_configurations_verify(name, target):
    w = builtin_configuration(name, 3)
    assert w.width == 2
    assert w.injective
    assert verify_configuration(w) is None
    assert all(contains(builtin(target), e.target) for e in w.entries)
    assert all(e.target.size == 2 * e.index.size for e in w.entries)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["dg_to_g", "g_to_po", "g_to_t"])
def test_builtin_configurations_verify_at_size_four(name):
    assert verify_configuration(builtin_configuration(name, 4)) is None


def test_two_cycle_doubles_to_two_edges():
    two_cycle = digraph(2, [(0, 1), (1, 0)])
    (entry,) = configuration_entries("dg_to_g", [two_cycle]).entries
    assert entry.target.size == 4
    assert entry.target.tuple_count == 4
    assert entry.blocks == ((0, 1), (2, 3))


def test_tournament_formula_rejects_repeated_arguments():
    # without the inequality conjunct E(a, a) would hold on (a,0) → (a,1)
    w = configuration_entries("g_to_t", [edgeless_graph(1)])
    assert verify_configuration(w) is None


def test_unknown_builtin_is_rejected():
    with pytest.raises(ConfigurationError):
        builtin_configuration("g_to_lo", 2)


def test_non_member_index_is_rejected():
    arc = Structure.build(GRAPH_SIG, 2, {"E": [(0, 1)]})
    with pytest.raises(ConfigurationError):
        configuration_entries("g_to_po", [arc])


# ─── Verification ───────────────────────────────────────────────────────────────


def test_tampered_target_pinpoints_the_tuple():
    w = configuration_entries("dg_to_g", [digraph(2, [(0, 1)])])
    bad = ConfigEntry(w.entries[0].index, edgeless_graph(4), w.entries[0].blocks)
    violation = verify_configuration(ConfigWitness(w.interp, (bad,)))
    assert (violation.entry, violation.symbol, violation.tup, violation.expected) == (0, "R", (0, 1), True)


def test_empty_witness_verifies():
    w = builtin_configuration("g_to_po", 1)
    assert verify_configuration(ConfigWitness(w.interp, ())) is None


# ─── Identity and inclusion ─────────────────────────────────────────────────────


def test_identity_configuration_verifies():
    w = identity_configuration(enumerate_members_upto(GRAPHS, 3))
    assert w.width == 1
    assert verify_configuration(w) is None


def test_inclusion_into_the_disjoint_union():
    parts = [complete_graph(2), path_graph(3)]
    w = inclusion_configuration(parts)
    assert w.entries[0].target == disjoint_union(parts)
    assert w.entries[1].blocks == ((2,), (3,), (4,))
    assert verify_configuration(w) is None


def test_inclusion_into_a_given_target():
    w = inclusion_configuration([bare_set(n) for n in range(4)], bare_set(4))
    assert w.injective
    assert verify_configuration(w) is None


def test_inclusion_reads_renamed_symbols():
    target = Structure.build(GRAPH_SIG.rename({"E": "F"}), 3, {"F": [(0, 1), (1, 0)]})
    w = inclusion_configuration([complete_graph(2), edgeless_graph(2)], target, via={"E": "F"})
    assert verify_configuration(w) is None


def test_inclusion_needs_an_embedding():
    with pytest.raises(ConfigurationError):
        inclusion_configuration([complete_graph(3)], path_graph(4))


def test_entry_lookup_follows_isomorphisms():
    w = inclusion_configuration([path_graph(3)])
    moved = path_graph(3).relabel((1, 0, 2))
    entry = entry_for(w, moved)
    assert entry.index == moved
    assert verify_configuration(ConfigWitness(w.interp, (entry,))) is None


def test_entry_lookup_reports_missing_structures():
    with pytest.raises(ConfigurationError):
        entry_for(inclusion_configuration([path_graph(3)]), complete_graph(3))
