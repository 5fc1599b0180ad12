import pytest

from apps.classes.services.builtins import builtin
from apps.classes.services.enumeration import enumerate_members_upto
from apps.classes.specs import lex_class, super_class
from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation
from apps.configurations.exceptions import InjectivityError
from apps.configurations.formulas import atom
from apps.configurations.services.builders import disjoint_union, inclusion_configuration
from apps.configurations.services.transfers import (
    full_config_transfer,
    full_grids,
    lex_assemblies,
    lex_config_transfer,
    super_config_transfer,
    superpositions,
)
from apps.configurations.services.verify import verify_configuration
from apps.kernel.builders import EMPTY_SIG, bare_set
from apps.kernel.exceptions import SignatureError
from apps.products.datatype import FullAssembly, LexAssembly

SETS = builtin("sets")
GRAPHS = builtin("graphs")
LINEAR_ORDERS = builtin("linear_orders")


def _sets_into(n: int, up_to: int) -> ConfigWitness:
    return inclusion_configuration([bare_set(k) for k in range(up_to + 1)], bare_set(n))


def _collapsed(n: int) -> ConfigWitness:
    interp = Interpretation.of(EMPTY_SIG, EMPTY_SIG, 1, {})
    return ConfigWitness(interp, (ConfigEntry.of(bare_set(n), bare_set(n), [(0,)] * n),))


# ─── Lexicographic ──────────────────────────────────────────────────────────────


def test_lex_sets_over_sets():
    w = lex_config_transfer(_sets_into(4, 4), _sets_into(4, 4), lex_assemblies(lex_class(SETS, SETS), 4))
    assert w.width == 2
    assert w.interp.source.names == ("E",)
    assert verify_configuration(w) is None


def test_single_fiber_is_one_class():
    w = lex_config_transfer(_sets_into(3, 3), _sets_into(3, 3), [LexAssembly.uniform(bare_set(3), bare_set(1))])
    (entry,) = w.entries
    assert len(entry.index.rel("E")) == 9
    assert len(set(entry.blocks)) == 3


def test_lex_base_must_be_injective():
    with pytest.raises(InjectivityError):
        lex_config_transfer(_sets_into(2, 2), _collapsed(2), [LexAssembly.uniform(bare_set(1), bare_set(2))])


# ─── Full ───────────────────────────────────────────────────────────────────────


def test_full_sets_by_sets():
    w = full_config_transfer(_sets_into(2, 2), _sets_into(2, 2), full_grids(SETS, SETS, 2))
    assert w.interp.source.names == ("E0", "E1")
    assert len(w.entries) == 4
    assert verify_configuration(w) is None


def test_full_graphs_by_sets_share_one_target():
    graphs = enumerate_members_upto(GRAPHS, 2)
    shared = disjoint_union(graphs)
    w0 = inclusion_configuration(graphs, shared)
    w1 = inclusion_configuration([bare_set(k) for k in range(3)], shared)
    w = full_config_transfer(w0, w1, full_grids(GRAPHS, SETS, 2))
    assert w.interp.source.names == ("E0", "E1", "E")
    assert verify_configuration(w) is None


def test_full_factors_must_be_injective():
    with pytest.raises(InjectivityError):
        full_config_transfer(_collapsed(2), _sets_into(2, 2), [FullAssembly(bare_set(2), bare_set(1))])


def test_factor_targets_must_agree():
    graphs = enumerate_members_upto(GRAPHS, 2)
    with pytest.raises(SignatureError):
        full_config_transfer(inclusion_configuration(graphs), _sets_into(2, 2), full_grids(GRAPHS, SETS, 1))


# ─── Free superposition ─────────────────────────────────────────────────────────


def test_graphs_over_linear_orders():
    shared = disjoint_union(enumerate_members_upto(super_class(GRAPHS, LINEAR_ORDERS), 3))
    w0 = inclusion_configuration(enumerate_members_upto(GRAPHS, 3), shared)
    w1 = inclusion_configuration(enumerate_members_upto(LINEAR_ORDERS, 3), shared)
    w = super_config_transfer(w0, w1, superpositions(GRAPHS, LINEAR_ORDERS, 3))
    assert w.width == 2
    assert verify_configuration(w) is None


def test_superposing_a_set_keeps_the_formula():
    graphs = enumerate_members_upto(GRAPHS, 2)
    shared = disjoint_union(graphs)
    w0 = inclusion_configuration(graphs, shared)
    w1 = inclusion_configuration([bare_set(k) for k in range(3)], shared)
    w = super_config_transfer(w0, w1, superpositions(GRAPHS, SETS, 2))
    assert w.interp.formula("E") == atom("E", (0, 0), (1, 0))
    assert verify_configuration(w) is None


def test_graphs_over_graphs_read_renamed_symbols():
    shared = disjoint_union(enumerate_members_upto(super_class(GRAPHS, GRAPHS), 2))
    graphs = enumerate_members_upto(GRAPHS, 2)
    w0 = inclusion_configuration(graphs, shared, via={"E": "E_0"})
    w1 = inclusion_configuration(graphs, shared, via={"E": "E_1"})
    w = super_config_transfer(w0, w1, superpositions(GRAPHS, GRAPHS, 2))
    assert w.interp.source.names == ("E_0", "E_1")
    assert verify_configuration(w) is None
